#include "wbf/geometry.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "wbf/errors.hpp"

namespace wbf {

namespace {

constexpr std::array<std::string_view, kMeasurementCount> kMeasurementNames = {"tylcv", "ccr", "humidity"};
constexpr std::array<std::string_view, 5> kKindNames = {"unplanted", "tomato", "strawberry", "pond", "wetland"};
constexpr std::array<std::string_view, 6> kOwnerNames = {"client",    "neighbor1", "neighbor2",
                                                        "neighbor3", "neighbor4", "public"};

struct LayoutRecord {
  CellRect rect;
  CropCell cell;
};

template <std::size_t N>
std::size_t lookup(const std::array<std::string_view, N>& names, std::string_view token, std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == token) return i;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(token) + "' in layout");
}

Geometry miniberry(int side) {
  // Left half tomato, right half strawberry; everything client-owned.
  Grid<CropCell> cells(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      cells(x, y) = CropCell{x < side / 2 ? CropKind::Tomato : CropKind::Strawberry, Owner::Client};
    }
  }
  return Geometry("miniberry-" + std::to_string(side), std::move(cells));
}

CropKind crop_of(Measurement m) {
  return m == Measurement::Tylcv ? CropKind::Tomato : CropKind::Strawberry;
}

}  // namespace

std::string_view measurement_name(Measurement m) { return kMeasurementNames[index_of(m)]; }

Measurement parse_measurement(std::string_view name) {
  for (Measurement m : kMeasurements) {
    if (measurement_name(m) == name) return m;
  }
  throw ConfigError("unknown measurement '" + std::string(name) + "'");
}

std::string_view crop_kind_name(CropKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }
std::string_view owner_name(Owner owner) { return kOwnerNames[static_cast<std::size_t>(owner)]; }

Geometry parse_layout(std::string_view text, std::string name) {
  std::vector<LayoutRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int width = 0;
  int height = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;

    LayoutRecord rec;
    std::string kind;
    std::string owner;
    std::istringstream full(line);
    if (!(full >> rec.rect.x0 >> rec.rect.y0 >> rec.rect.x1 >> rec.rect.y1 >> kind >> owner)) {
      throw ConfigError("layout line " + std::to_string(line_no) + ": expected 'x0 y0 x1 y1 kind owner'");
    }
    std::string extra;
    if (full >> extra) throw ConfigError("layout line " + std::to_string(line_no) + ": trailing tokens");
    if (rec.rect.x0 < 0 || rec.rect.y0 < 0 || rec.rect.empty()) {
      throw ConfigError("layout line " + std::to_string(line_no) + ": empty or negative rectangle");
    }
    rec.cell.kind = static_cast<CropKind>(lookup(kKindNames, kind, "kind"));
    rec.cell.owner = static_cast<Owner>(lookup(kOwnerNames, owner, "owner"));
    width = std::max(width, rec.rect.x1);
    height = std::max(height, rec.rect.y1);
    records.push_back(rec);
  }
  if (records.empty()) throw ConfigError("layout '" + name + "' has no rectangles");

  Grid<CropCell> cells(width, height);
  for (const auto& rec : records) {
    for (int y = rec.rect.y0; y < rec.rect.y1; ++y) {
      auto row = cells.data().subspan(cells.index(rec.rect.x0, y), static_cast<std::size_t>(rec.rect.width()));
      std::fill(row.begin(), row.end(), rec.cell);
    }
  }
  return Geometry(std::move(name), std::move(cells));
}

bool is_geometry_name(std::string_view name) {
  return name == "waterberry" || name == "miniberry-10" || name == "miniberry-30" || name == "miniberry-100";
}

Geometry build_geometry(std::string_view name) {
  if (name == "waterberry") return parse_layout(waterberry_layout_text(), "waterberry");
  if (name == "miniberry-10") return miniberry(10);
  if (name == "miniberry-30") return miniberry(30);
  if (name == "miniberry-100") return miniberry(100);
  throw ConfigError("unknown geometry '" + std::string(name) +
                    "' (expected waterberry, miniberry-10, miniberry-30 or miniberry-100)");
}

std::shared_ptr<const Geometry> make_geometry(std::string_view name) {
  return std::make_shared<const Geometry>(build_geometry(name));
}

MaskGrid relevance_mask(const Geometry& g, Measurement m) {
  MaskGrid mask(g.width(), g.height(), 0);
  auto cells = g.cells().data();
  auto out = mask.data();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CropCell& c = cells[i];
    if (c.owner != Owner::Client) continue;
    bool relevant = false;
    switch (m) {
      case Measurement::Tylcv: relevant = c.kind == CropKind::Tomato; break;
      case Measurement::Ccr: relevant = c.kind == CropKind::Strawberry; break;
      case Measurement::Humidity: relevant = c.kind == CropKind::Tomato || c.kind == CropKind::Strawberry; break;
    }
    out[i] = relevant ? 1 : 0;
  }
  return mask;
}

MaskGrid susceptibility_mask(const Geometry& g, Measurement m) {
  if (!is_disease(m)) throw ContractViolation("humidity has no susceptibility mask");
  const CropKind crop = crop_of(m);
  MaskGrid mask(g.width(), g.height(), 0);
  auto cells = g.cells().data();
  auto out = mask.data();
  for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cells[i].kind == crop ? 1 : 0;
  return mask;
}

std::array<MaskGrid, kMeasurementCount> relevance_masks(const Geometry& g) {
  return {relevance_mask(g, Measurement::Tylcv), relevance_mask(g, Measurement::Ccr),
          relevance_mask(g, Measurement::Humidity)};
}

CellRect client_crop_bounds(const Geometry& g, CropKind kind) {
  CellRect r{g.width(), g.height(), 0, 0};
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const CropCell& c = g.cell(x, y);
      if (c.owner != Owner::Client || c.kind != kind) continue;
      r.x0 = std::min(r.x0, x);
      r.y0 = std::min(r.y0, y);
      r.x1 = std::max(r.x1, x + 1);
      r.y1 = std::max(r.y1, y + 1);
    }
  }
  if (r.empty()) return CellRect{};
  return r;
}

}  // namespace wbf
