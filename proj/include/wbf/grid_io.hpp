#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wbf/grid.hpp"

namespace wbf {

/// Binary grid file: 16-byte header (magic "WBFG", u32 width, u32 height,
/// u32 dtype) followed by width * height row-major values. All integers and
/// values little-endian; dtype 1 is IEEE-754 float32.
inline constexpr std::uint32_t kGridDtypeFloat32 = 1;

std::string encode_grid_binary(const FieldGrid& grid);
FieldGrid decode_grid_binary(std::string_view bytes);

/// One CSV line per row (y), comma-separated, each value printed with 9
/// significant digits so float32 values round-trip exactly.
std::string encode_grid_csv(const FieldGrid& grid);
FieldGrid decode_grid_csv(std::string_view text);

/// Writes `content` to `path` through a temporary file and rename, creating
/// parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

void write_grid_binary(const std::filesystem::path& path, const FieldGrid& grid);
FieldGrid read_grid_binary(const std::filesystem::path& path);
void write_grid_csv(const std::filesystem::path& path, const FieldGrid& grid);

}  // namespace wbf
