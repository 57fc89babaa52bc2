#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "pickloop/core.hpp"
#include "pickloop/layout.hpp"
#include "pickloop/model.hpp"
#include "pickloop/solver.hpp"

namespace testsupport {

using namespace pickloop;

inline Sku make_sku(const std::string& id, double score, int height_mm,
                    int width_mm, double picks_avg, int rank = 1) {
  Sku sku;
  sku.id = id;
  sku.score = score;
  sku.height_mm = height_mm;
  sku.width_mm = width_mm;
  sku.picks_avg = picks_avg;
  sku.picks_by_day.fill(picks_avg);  // uniform week keeps the mean exact
  sku.rank = rank;
  return sku;
}

inline Sku make_sku_days(const std::string& id, double score, int height_mm,
                         int width_mm, const std::array<double, kNumDays>& days,
                         int rank = 1) {
  Sku sku;
  sku.id = id;
  sku.score = score;
  sku.height_mm = height_mm;
  sku.width_mm = width_mm;
  sku.picks_by_day = days;
  double sum = 0.0;
  for (double p : days) sum += p;
  sku.picks_avg = sum / kNumDays;
  sku.rank = rank;
  return sku;
}

inline Shelf make_shelf(const std::string& id, int station, int height_mm,
                        int width_mm, double distance_m,
                        ShelfKind kind = ShelfKind::type1) {
  Shelf shelf;
  shelf.id = id;
  shelf.station = station;
  shelf.height_mm = height_mm;
  shelf.width_mm = width_mm;
  shelf.distance_m = distance_m;
  shelf.kind = kind;
  return shelf;
}

// Two SKUs competing for two shelves of one station; the optimum places
// the pick-heavy SKU on the near shelf and the other on the far shelf,
// for a combined objective of 1.775 at alpha=1, delta=1.
inline Instance reference_instance() {
  Instance instance;
  instance.separator_gap_mm = 20;
  instance.skus.push_back(make_sku("A", 0.5, 100, 100, 10.0));
  instance.skus.push_back(make_sku("B", 0.4, 100, 100, 30.0));
  return instance;
}

inline Layout reference_layout() {
  Layout layout;
  layout.n_stations = 1;
  layout.shelves.push_back(make_shelf("r1", 1, 250, 150, 1.0));
  layout.shelves.push_back(make_shelf("r2", 1, 250, 150, 2.0));
  return layout;
}

inline SolveParams reference_params() {
  SolveParams params;
  params.alpha = 1.0;
  params.delta = 1.0;
  params.delta_day = 1.0;
  params.gap_target = 0.0;
  return params;
}

// Random tiny instances sized for the exhaustive oracle: up to 6 SKUs
// over 2 stations with up to 4 shelves each.
inline Instance tiny_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_skus(2, 6);
  std::uniform_int_distribution<int> width(30, 120);
  std::uniform_int_distribution<int> height(80, 240);
  std::uniform_int_distribution<int> picks(0, 20);
  std::uniform_int_distribution<int> rank(1, 3);
  std::uniform_real_distribution<double> score(0.05, 1.0);

  Instance instance;
  instance.separator_gap_mm = 5;
  const int n = n_skus(rng);
  for (int i = 0; i < n; ++i) {
    std::array<double, kNumDays> days{};
    for (double& p : days) p = picks(rng);
    if (i == 0) days[0] = std::max(days[0], 1.0);
    instance.skus.push_back(make_sku_days("v" + std::to_string(i + 1),
                                          score(rng), height(rng), width(rng),
                                          days, rank(rng)));
  }
  return instance;
}

inline Layout tiny_layout(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> n_shelves(2, 4);
  std::uniform_int_distribution<int> width(100, 260);
  const std::array<double, 4> distances = {0.95, 1.90, 2.85, 3.80};
  std::uniform_int_distribution<int> dist_index(0, 3);

  Layout layout;
  layout.n_stations = 2;
  for (int k = 1; k <= 2; ++k) {
    const int n = n_shelves(rng);
    for (int i = 0; i < n; ++i) {
      layout.shelves.push_back(make_shelf(
          "s" + std::to_string(k) + "_" + std::to_string(i + 1), k, 250,
          width(rng), distances[dist_index(rng)]));
    }
  }
  return layout;
}

inline SolveParams tiny_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
  const std::array<double, 3> deltas = {0.3, 0.6, 1.0};
  SolveParams params;
  params.alpha = 1.0;
  params.delta = deltas[rng() % 3];
  params.delta_day = params.delta;
  params.gap_target = 0.0;
  return params;
}

inline SolveControl exact_control() {
  SolveControl control;
  control.mode = SolveMode::exact;
  control.gap_target = 0.0;
  control.time_limit_s = 30.0;
  return control;
}

}  // namespace testsupport
