#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace wbf {

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct Move {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

/// Dense row-major 2-D grid. Cell (x, y) lives at index y * width + x.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid extent");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool contains(Position p) const { return contains(p.x, p.y); }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  T& at(int x, int y) {
    if (!contains(x, y)) throw std::out_of_range("grid cell out of range");
    return data_[index(x, y)];
  }
  const T& at(int x, int y) const {
    if (!contains(x, y)) throw std::out_of_range("grid cell out of range");
    return data_[index(x, y)];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  void fill(const T& value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using FieldGrid = Grid<float>;
using MaskGrid = Grid<std::uint8_t>;

}  // namespace wbf
