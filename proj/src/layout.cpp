#include "pickloop/layout.hpp"

#include <set>
#include <stdexcept>

namespace pickloop {

const char* to_string(ShelfKind kind) {
  return kind == ShelfKind::type1 ? "type1" : "type2";
}

ShelfKind shelf_kind_from_string(const std::string& name) {
  if (name == "type1") return ShelfKind::type1;
  if (name == "type2") return ShelfKind::type2;
  throw std::invalid_argument("unknown shelf kind: " + name);
}

namespace {

constexpr int kType1Height = 250;
constexpr int kType2Height = 450;
constexpr int kType1Width = 1000;
constexpr int kType2Width = 1200;

// Distances (meters) by rack position and row. Rows 2-3 are face level.
constexpr double kFrontInnerFace = 0.95;
constexpr double kFrontInnerEdge = 1.90;
constexpr double kFrontOuterFace = 1.90;
constexpr double kFrontOuterEdge = 2.85;
constexpr double kBackFace = 2.85;
constexpr double kBackEdge = 3.80;

void add_rack(std::vector<ShelfSpec>& pattern, const std::string& rack,
              ShelfKind kind, double face_distance, double edge_distance) {
  const int height = kind == ShelfKind::type1 ? kType1Height : kType2Height;
  const int width = kind == ShelfKind::type1 ? kType1Width : kType2Width;
  for (int row = 1; row <= 4; ++row) {
    const bool face = row == 2 || row == 3;
    pattern.push_back({rack + "_r" + std::to_string(row), height, width,
                       face ? face_distance : edge_distance, kind});
  }
}

}  // namespace

const std::vector<ShelfSpec>& default_station_pattern() {
  static const std::vector<ShelfSpec> pattern = [] {
    std::vector<ShelfSpec> p;
    add_rack(p, "fi1", ShelfKind::type1, kFrontInnerFace, kFrontInnerEdge);
    add_rack(p, "fi2", ShelfKind::type1, kFrontInnerFace, kFrontInnerEdge);
    add_rack(p, "fo1", ShelfKind::type1, kFrontOuterFace, kFrontOuterEdge);
    add_rack(p, "fo2", ShelfKind::type1, kFrontOuterFace, kFrontOuterEdge);
    add_rack(p, "b1", ShelfKind::type2, kBackFace, kBackEdge);
    add_rack(p, "b2", ShelfKind::type2, kBackFace, kBackEdge);
    return p;
  }();
  return pattern;
}

Layout scale_layout(int n_stations, const std::vector<ShelfSpec>& pattern) {
  if (n_stations < 1) throw std::invalid_argument("n_stations must be >= 1");
  if (pattern.empty()) throw std::invalid_argument("empty shelf pattern");
  Layout layout;
  layout.n_stations = n_stations;
  layout.shelves.reserve(static_cast<std::size_t>(n_stations) * pattern.size());
  for (int station = 1; station <= n_stations; ++station) {
    for (const ShelfSpec& spec : pattern) {
      layout.shelves.push_back({"s" + std::to_string(station) + "_" + spec.slot,
                                station, spec.height_mm, spec.width_mm,
                                spec.distance_m, spec.kind});
    }
  }
  return layout;
}

Layout build_default_layout() { return scale_layout(8, default_station_pattern()); }

std::vector<Violation> validate_layout(const Layout& layout) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const Shelf& shelf : layout.shelves) {
    if (!seen.insert(shelf.id).second) {
      out.push_back({"duplicate_shelf_id", shelf.id, "shelf id appears twice"});
    }
    if (shelf.station < 1 || shelf.station > layout.n_stations) {
      out.push_back({"station_range", shelf.id,
                     "station outside 1.." + std::to_string(layout.n_stations)});
    }
    if (shelf.height_mm <= 0 || shelf.width_mm <= 0) {
      out.push_back({"shelf_dims", shelf.id, "nonpositive shelf dimensions"});
    }
    if (shelf.distance_m <= 0.0) {
      out.push_back({"shelf_distance", shelf.id, "distance must be positive"});
    }
  }
  return out;
}

double picking_efficiency(const Shelf& shelf) {
  if (shelf.distance_m <= 0.0) {
    throw std::domain_error("nonpositive picker distance for shelf " + shelf.id);
  }
  return 1.0 / shelf.distance_m;
}

}  // namespace pickloop
