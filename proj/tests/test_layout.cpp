#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <stdexcept>

#include "pickloop/layout.hpp"
#include "support.hpp"

using namespace pickloop;
using namespace testsupport;

TEST_CASE("shelf kind strings round-trip") {
  CHECK(shelf_kind_from_string(to_string(ShelfKind::type1)) == ShelfKind::type1);
  CHECK(shelf_kind_from_string(to_string(ShelfKind::type2)) == ShelfKind::type2);
  CHECK_THROWS_AS(shelf_kind_from_string("type3"), std::invalid_argument);
}

TEST_CASE("default station pattern") {
  const auto& pattern = default_station_pattern();
  REQUIRE(pattern.size() == 24);

  int type1 = 0, type2 = 0;
  for (const ShelfSpec& spec : pattern) {
    if (spec.kind == ShelfKind::type1) {
      ++type1;
      CHECK(spec.height_mm == 250);
      CHECK(spec.width_mm == 1000);
    } else {
      ++type2;
      CHECK(spec.height_mm == 450);
      CHECK(spec.width_mm == 1200);
    }
  }
  CHECK(type1 == 16);
  CHECK(type2 == 8);

  std::map<double, int> distances;
  for (const ShelfSpec& spec : pattern) ++distances[spec.distance_m];
  CHECK(distances[0.95] == 4);
  CHECK(distances[1.90] == 8);
  CHECK(distances[2.85] == 8);
  CHECK(distances[3.80] == 4);
}

TEST_CASE("default layout") {
  const Layout layout = build_default_layout();
  CHECK(layout.n_stations == 8);
  REQUIRE(layout.shelves.size() == 192);

  int type1 = 0, type2 = 0;
  std::set<std::string> ids;
  std::map<int, int> per_station;
  for (const Shelf& shelf : layout.shelves) {
    ids.insert(shelf.id);
    ++per_station[shelf.station];
    (shelf.kind == ShelfKind::type1 ? type1 : type2) += 1;
  }
  CHECK(type1 == 128);
  CHECK(type2 == 64);
  CHECK(ids.size() == 192);
  for (int k = 1; k <= 8; ++k) CHECK(per_station[k] == 24);
  CHECK(validate_layout(layout).empty());
}

TEST_CASE("scale layout") {
  const Layout two = scale_layout(2, default_station_pattern());
  CHECK(two.n_stations == 2);
  CHECK(two.shelves.size() == 48);
  CHECK_THROWS_AS(scale_layout(0, default_station_pattern()),
                  std::invalid_argument);
  CHECK_THROWS_AS(scale_layout(2, {}), std::invalid_argument);
}

TEST_CASE("picking efficiency is the inverse distance") {
  Shelf near = make_shelf("near", 1, 250, 1000, 0.95);
  Shelf far = make_shelf("far", 1, 250, 1000, 2.85);
  CHECK(picking_efficiency(near) == doctest::Approx(1.0526315789473684));
  CHECK(picking_efficiency(far) == doctest::Approx(0.3508771929824561));
  near.distance_m = 0.0;
  CHECK_THROWS_AS(picking_efficiency(near), std::domain_error);
}

TEST_CASE("validate_layout flags broken shelves") {
  Layout layout = reference_layout();
  layout.shelves.push_back(layout.shelves[0]);  // duplicate id
  layout.shelves.push_back(make_shelf("bad1", 5, 250, 100, 1.0));
  layout.shelves.push_back(make_shelf("bad2", 1, 0, 100, 1.0));
  layout.shelves.push_back(make_shelf("bad3", 1, 250, 100, -1.0));

  const auto violations = validate_layout(layout);
  std::set<std::string> rules;
  for (const Violation& v : violations) rules.insert(v.rule);
  CHECK(rules.count("duplicate_shelf_id") == 1);
  CHECK(rules.count("station_range") == 1);
  CHECK(rules.count("shelf_dims") == 1);
  CHECK(rules.count("shelf_distance") == 1);
}
