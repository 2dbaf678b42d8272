#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "wbf/grid.hpp"

namespace wbf {

enum class Measurement : std::uint8_t { Tylcv = 0, Ccr = 1, Humidity = 2 };

inline constexpr std::size_t kMeasurementCount = 3;
inline constexpr std::array<Measurement, kMeasurementCount> kMeasurements = {
    Measurement::Tylcv, Measurement::Ccr, Measurement::Humidity};

constexpr std::size_t index_of(Measurement m) { return static_cast<std::size_t>(m); }
constexpr bool is_disease(Measurement m) { return m != Measurement::Humidity; }

/// Lower-case identifier: "tylcv", "ccr", "humidity".
std::string_view measurement_name(Measurement m);
Measurement parse_measurement(std::string_view name);

enum class CropKind : std::uint8_t { Unplanted, Tomato, Strawberry, Pond, Wetland };

/// Client is the farm being scored; Neighbor1..4 are the adjacent farms.
enum class Owner : std::uint8_t { Client, Neighbor1, Neighbor2, Neighbor3, Neighbor4, Public };

struct CropCell {
  CropKind kind = CropKind::Unplanted;
  Owner owner = Owner::Public;
  friend bool operator==(const CropCell&, const CropCell&) = default;
};

std::string_view crop_kind_name(CropKind kind);
std::string_view owner_name(Owner owner);

class Geometry {
 public:
  Geometry(std::string name, Grid<CropCell> cells) : name_(std::move(name)), cells_(std::move(cells)) {}

  const std::string& name() const { return name_; }
  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  std::size_t cell_count() const { return cells_.size(); }
  const CropCell& cell(int x, int y) const { return cells_(x, y); }
  const Grid<CropCell>& cells() const { return cells_; }

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  std::string name_;
  Grid<CropCell> cells_;
};

/// Axis-aligned half-open cell rectangle [x0, x1) x [y0, y1).
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

/// Parses the rectangle layout format: one `x0 y0 x1 y1 kind owner` record per
/// line, `#` starts a comment. Later rectangles paint over earlier ones; the
/// grid extent is the maximum x1 / y1 seen. Throws ConfigError on bad input.
Geometry parse_layout(std::string_view text, std::string name);

/// The checked-in Waterberry layout (data/waterberry.layout), embedded at build time.
std::string_view waterberry_layout_text();

bool is_geometry_name(std::string_view name);

/// "waterberry", "miniberry-10", "miniberry-30" or "miniberry-100".
Geometry build_geometry(std::string_view name);
std::shared_ptr<const Geometry> make_geometry(std::string_view name);

/// Cells whose measurement counts toward the score (client-owned crops).
MaskGrid relevance_mask(const Geometry& g, Measurement m);

/// Cells where the disease may propagate (matching crop, any owner).
/// Humidity has no susceptibility mask: throws ContractViolation.
MaskGrid susceptibility_mask(const Geometry& g, Measurement m);

std::array<MaskGrid, kMeasurementCount> relevance_masks(const Geometry& g);

/// Bounding box of client-owned cells of the given crop; empty if none.
CellRect client_crop_bounds(const Geometry& g, CropKind kind);

}  // namespace wbf
