#pragma once

#include <array>
#include <vector>

#include "pickloop/core.hpp"
#include "pickloop/layout.hpp"
#include "pickloop/model.hpp"

namespace pickloop {

struct ObjectiveParts {
  double part1 = 0.0;     // sum of selected importance scores
  double part2 = 0.0;     // average picking efficiency per pick
  double combined = 0.0;  // part1 + alpha * part2
};

struct EvaluationReport {
  ObjectiveParts objective;
  std::vector<double> station_picks;  // z_k, indexed station-1
  std::vector<std::array<double, kNumDays>> station_picks_by_day;  // z_k^t
  double max_rel_dev = 0.0;  // of average workloads
  std::array<double, kNumDays> max_rel_dev_by_day{};
  int n_selected = 0;
  std::vector<Violation> audit;
};

ObjectiveParts objective_parts(const Instance& instance, const Layout& layout,
                               const Solution& solution, double alpha);

struct StationWorkloads {
  std::vector<double> avg;                               // z_k
  std::vector<std::array<double, kNumDays>> by_day;      // z_k^t
};

StationWorkloads station_workloads(const Instance& instance,
                                   const Layout& layout,
                                   const Solution& solution);

/// dev(k,t) = z_k^t / mean_k(z_k^t) - 1; days with zero total come out as
/// all-zero deviations.
struct DeviationTable {
  std::vector<std::array<double, kNumDays>> dev;  // per station, per day
  std::array<double, kNumDays> max_positive{};
  std::array<double, kNumDays> max_negative{};
};

DeviationTable deviation_table(
    const std::vector<std::array<double, kNumDays>>& z_by_day);

/// Checks uniqueness, height fit, width+gap capacity, precedence ordering
/// between consecutive nonempty ranks, and balance bounds (average or
/// per-day). Violations are data; an empty list means feasible.
std::vector<Violation> audit_assignment(const Instance& instance,
                                        const Layout& layout,
                                        const Solution& solution,
                                        const SolveParams& params,
                                        bool per_day);

struct DistanceHistogramRow {
  double distance_m = 0.0;
  double picks = 0.0;
  int sku_count = 0;
  std::array<double, kNumDays> picks_by_day{};
};

/// Picks aggregated by shelf distance for SKUs with height <= cap.
/// Rows are sorted by distance.
std::vector<DistanceHistogramRow> distance_histogram(const Instance& instance,
                                                     const Layout& layout,
                                                     const Solution& solution,
                                                     int height_cap_mm);

EvaluationReport evaluate_solution(const Instance& instance,
                                   const Layout& layout,
                                   const Solution& solution,
                                   const SolveParams& params, bool per_day);

}  // namespace pickloop
