#include "wbf/grid_io.hpp"

#include <bit>
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "wbf/errors.hpp"

namespace wbf {

namespace {

static_assert(std::endian::native == std::endian::little, "grid I/O assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  out.append(bytes, 4);
}

std::uint32_t get_u32(std::string_view in, std::size_t offset) {
  std::uint32_t v;
  std::memcpy(&v, in.data() + offset, 4);
  return v;
}

}  // namespace

std::string encode_grid_binary(const FieldGrid& grid) {
  std::string out;
  out.reserve(16 + grid.size() * sizeof(float));
  out.append("WBFG", 4);
  put_u32(out, static_cast<std::uint32_t>(grid.width()));
  put_u32(out, static_cast<std::uint32_t>(grid.height()));
  put_u32(out, kGridDtypeFloat32);
  const auto values = grid.data();
  out.append(reinterpret_cast<const char*>(values.data()), values.size_bytes());
  return out;
}

FieldGrid decode_grid_binary(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "WBFG") throw std::runtime_error("not a WBFG grid file");
  const std::uint32_t width = get_u32(bytes, 4);
  const std::uint32_t height = get_u32(bytes, 8);
  const std::uint32_t dtype = get_u32(bytes, 12);
  if (dtype != kGridDtypeFloat32) throw std::runtime_error("unsupported WBFG dtype " + std::to_string(dtype));
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() != 16 + count * sizeof(float)) throw std::runtime_error("WBFG payload size mismatch");
  FieldGrid grid(static_cast<int>(width), static_cast<int>(height));
  std::memcpy(grid.data().data(), bytes.data() + 16, count * sizeof(float));
  return grid;
}

std::string encode_grid_csv(const FieldGrid& grid) {
  std::string out;
  char buf[32];
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (x) out.push_back(',');
      const int n = std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(grid(x, y)));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

FieldGrid decode_grid_csv(std::string_view text) {
  std::vector<float> values;
  int width = -1;
  int height = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    int count = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) comma = line.size();
      const std::string cell(line.substr(start, comma - start));
      char* end = nullptr;
      const float v = std::strtof(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) throw std::runtime_error("bad CSV grid value '" + cell + "'");
      values.push_back(v);
      ++count;
      start = comma + 1;
    }
    if (width >= 0 && count != width) throw std::runtime_error("ragged CSV grid");
    width = count;
    ++height;
  }
  if (width < 0) width = 0;
  FieldGrid grid(width, height);
  std::copy(values.begin(), values.end(), grid.data().begin());
  return grid;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_grid_binary(const std::filesystem::path& path, const FieldGrid& grid) {
  write_file_atomic(path, encode_grid_binary(grid));
}

FieldGrid read_grid_binary(const std::filesystem::path& path) { return decode_grid_binary(read_file(path)); }

void write_grid_csv(const std::filesystem::path& path, const FieldGrid& grid) {
  write_file_atomic(path, encode_grid_csv(grid));
}

}  // namespace wbf
