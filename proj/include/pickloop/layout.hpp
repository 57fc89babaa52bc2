#pragma once

#include <string>
#include <vector>

#include "pickloop/core.hpp"

namespace pickloop {

enum class ShelfKind { type1, type2 };

const char* to_string(ShelfKind kind);
ShelfKind shelf_kind_from_string(const std::string& name);

struct Shelf {
  std::string id;
  int station = 1;      // 1-based station index
  int height_mm = 0;
  int width_mm = 0;
  double distance_m = 0.0;  // picker-to-shelf distance
  ShelfKind kind = ShelfKind::type1;
};

struct Layout {
  int n_stations = 0;
  std::vector<Shelf> shelves;
};

/// Geometry of one shelf slot, replicated per station by scale_layout.
struct ShelfSpec {
  std::string slot;  // stable per-station slot name, e.g. "fi1_r2"
  int height_mm = 0;
  int width_mm = 0;
  double distance_m = 0.0;
  ShelfKind kind = ShelfKind::type1;
};

/// The 24-shelf station pattern: four front racks (two inner, two outer)
/// of type-1 shelves and two back racks of type-2 shelves, four rows each.
/// Face-level rows (2-3) are closer than top/bottom rows (1, 4).
const std::vector<ShelfSpec>& default_station_pattern();

/// Replicates the pattern across n_stations stations.
Layout scale_layout(int n_stations, const std::vector<ShelfSpec>& pattern);

/// Eight stations with the default pattern: 192 shelves, 128 type 1 and
/// 64 type 2.
Layout build_default_layout();

std::vector<Violation> validate_layout(const Layout& layout);

/// Inverse picker distance, 1/d_r. Throws on nonpositive distance.
double picking_efficiency(const Shelf& shelf);

}  // namespace pickloop
