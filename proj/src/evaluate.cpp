#include "pickloop/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pickloop {

namespace {

constexpr double kTol = 1e-9;

struct PlacementIndex {
  std::map<std::string, const Sku*> skus;
  std::map<std::string, const Shelf*> shelves;

  PlacementIndex(const Instance& instance, const Layout& layout) {
    for (const Sku& sku : instance.skus) skus[sku.id] = &sku;
    for (const Shelf& shelf : layout.shelves) shelves[shelf.id] = &shelf;
  }

  const Sku& sku(const std::string& id) const {
    auto it = skus.find(id);
    if (it == skus.end()) throw std::invalid_argument("unknown SKU: " + id);
    return *it->second;
  }

  const Shelf& shelf(const std::string& id) const {
    auto it = shelves.find(id);
    if (it == shelves.end()) throw std::invalid_argument("unknown shelf: " + id);
    return *it->second;
  }
};

}  // namespace

ObjectiveParts objective_parts(const Instance& instance, const Layout& layout,
                               const Solution& solution, double alpha) {
  PlacementIndex index(instance, layout);
  ObjectiveParts parts;
  if (solution.placements.empty()) return parts;
  const double total = total_picks(instance);
  for (const auto& [sku_id, shelf_id] : solution.placements) {
    const Sku& sku = index.sku(sku_id);
    const Shelf& shelf = index.shelf(shelf_id);
    parts.part1 += sku.score;
    parts.part2 += sku.picks_avg / (total * shelf.distance_m);
  }
  parts.combined = parts.part1 + alpha * parts.part2;
  return parts;
}

StationWorkloads station_workloads(const Instance& instance,
                                   const Layout& layout,
                                   const Solution& solution) {
  PlacementIndex index(instance, layout);
  StationWorkloads workloads;
  workloads.avg.assign(layout.n_stations, 0.0);
  workloads.by_day.assign(layout.n_stations, {});
  for (const auto& [sku_id, shelf_id] : solution.placements) {
    const Sku& sku = index.sku(sku_id);
    const Shelf& shelf = index.shelf(shelf_id);
    const int k = shelf.station - 1;
    workloads.avg[k] += sku.picks_avg;
    for (int t = 0; t < kNumDays; ++t) {
      workloads.by_day[k][t] += sku.picks_by_day[t];
    }
  }
  return workloads;
}

DeviationTable deviation_table(
    const std::vector<std::array<double, kNumDays>>& z_by_day) {
  DeviationTable table;
  table.dev.assign(z_by_day.size(), {});
  if (z_by_day.empty()) return table;
  for (int t = 0; t < kNumDays; ++t) {
    double mean = 0.0;
    for (const auto& z : z_by_day) mean += z[t];
    mean /= static_cast<double>(z_by_day.size());
    for (std::size_t k = 0; k < z_by_day.size(); ++k) {
      const double dev = mean > 0.0 ? z_by_day[k][t] / mean - 1.0 : 0.0;
      table.dev[k][t] = dev;
      table.max_positive[t] = std::max(table.max_positive[t], dev);
      table.max_negative[t] = std::min(table.max_negative[t], dev);
    }
  }
  return table;
}

std::vector<Violation> audit_assignment(const Instance& instance,
                                        const Layout& layout,
                                        const Solution& solution,
                                        const SolveParams& params,
                                        bool per_day) {
  PlacementIndex index(instance, layout);
  std::vector<Violation> violations;
  auto add = [&](const std::string& rule, const std::string& subject,
                 const std::string& detail) {
    violations.push_back({rule, subject, detail});
  };

  std::map<std::string, int> seen;
  for (const auto& [sku_id, shelf_id] : solution.placements) {
    if (++seen[sku_id] == 2) {
      add("assign_once", sku_id, "SKU placed on more than one shelf");
    }
  }

  std::map<std::string, double> used_width;
  std::map<int, std::pair<int, int>> rank_span;  // rank -> (min, max) station
  for (const auto& [sku_id, shelf_id] : solution.placements) {
    const Sku& sku = index.sku(sku_id);
    const Shelf& shelf = index.shelf(shelf_id);
    if (sku.height_mm > shelf.height_mm) {
      std::ostringstream detail;
      detail << "unit height " << sku.height_mm << " mm exceeds shelf height "
             << shelf.height_mm << " mm";
      add("height_fit", sku_id + "@" + shelf_id, detail.str());
    }
    used_width[shelf_id] += sku.width_mm + instance.separator_gap_mm;
    auto it = rank_span.find(sku.rank);
    if (it == rank_span.end()) {
      rank_span[sku.rank] = {shelf.station, shelf.station};
    } else {
      it->second.first = std::min(it->second.first, shelf.station);
      it->second.second = std::max(it->second.second, shelf.station);
    }
  }

  for (const auto& [shelf_id, width] : used_width) {
    const Shelf& shelf = index.shelf(shelf_id);
    const double capacity = shelf.width_mm + instance.separator_gap_mm;
    if (width > capacity + kTol * std::max(1.0, capacity)) {
      std::ostringstream detail;
      detail << "used width " << width << " mm exceeds capacity " << capacity
             << " mm";
      add("capacity", shelf_id, detail.str());
    }
  }

  for (const auto& [rank, span] : rank_span) {
    auto next = rank_span.find(rank + 1);
    if (next != rank_span.end() && span.second > next->second.first) {
      std::ostringstream detail;
      detail << "rank " << rank << " reaches station " << span.second
             << " past rank " << rank + 1 << " starting at station "
             << next->second.first;
      add("precedence", "rank " + std::to_string(rank), detail.str());
    }
  }

  StationWorkloads workloads = station_workloads(instance, layout, solution);
  auto check_balance = [&](const std::vector<double>& z, double delta,
                           const std::string& label) {
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double lo = (1.0 - delta) * mean;
      const double hi = (1.0 + delta) * mean;
      const double tol = kTol * std::max(1.0, mean);
      if (z[k] < lo - tol || z[k] > hi + tol) {
        std::ostringstream detail;
        detail << label << " workload " << z[k] << " outside ["
               << lo << ", " << hi << "]";
        add("balance", "station " + std::to_string(k + 1), detail.str());
      }
    }
  };
  if (layout.n_stations > 0) {
    if (per_day) {
      for (int t = 0; t < kNumDays; ++t) {
        std::vector<double> z(layout.n_stations, 0.0);
        for (int k = 0; k < layout.n_stations; ++k) {
          z[k] = workloads.by_day[k][t];
        }
        check_balance(z, params.delta_day, kDayNames[t]);
      }
    } else {
      check_balance(workloads.avg, params.delta, "average");
    }
  }
  return violations;
}

std::vector<DistanceHistogramRow> distance_histogram(const Instance& instance,
                                                     const Layout& layout,
                                                     const Solution& solution,
                                                     int height_cap_mm) {
  PlacementIndex index(instance, layout);
  std::map<double, DistanceHistogramRow> rows;
  for (const auto& [sku_id, shelf_id] : solution.placements) {
    const Sku& sku = index.sku(sku_id);
    if (sku.height_mm > height_cap_mm) continue;
    const Shelf& shelf = index.shelf(shelf_id);
    DistanceHistogramRow& row = rows[shelf.distance_m];
    row.distance_m = shelf.distance_m;
    row.picks += sku.picks_avg;
    row.sku_count += 1;
    for (int t = 0; t < kNumDays; ++t) row.picks_by_day[t] += sku.picks_by_day[t];
  }
  std::vector<DistanceHistogramRow> out;
  out.reserve(rows.size());
  for (const auto& [distance, row] : rows) out.push_back(row);
  return out;
}

EvaluationReport evaluate_solution(const Instance& instance,
                                   const Layout& layout,
                                   const Solution& solution,
                                   const SolveParams& params, bool per_day) {
  EvaluationReport report;
  report.objective = objective_parts(instance, layout, solution, params.alpha);
  StationWorkloads workloads = station_workloads(instance, layout, solution);
  report.station_picks = workloads.avg;
  report.station_picks_by_day = workloads.by_day;
  report.n_selected = static_cast<int>(solution.placements.size());

  if (!workloads.avg.empty()) {
    double mean = 0.0;
    for (double z : workloads.avg) mean += z;
    mean /= static_cast<double>(workloads.avg.size());
    for (double z : workloads.avg) {
      if (mean > 0.0) {
        report.max_rel_dev = std::max(report.max_rel_dev, std::abs(z / mean - 1.0));
      }
    }
    DeviationTable table = deviation_table(workloads.by_day);
    for (int t = 0; t < kNumDays; ++t) {
      report.max_rel_dev_by_day[t] =
          std::max(table.max_positive[t], -table.max_negative[t]);
    }
  }
  report.audit = audit_assignment(instance, layout, solution, params, per_day);
  return report;
}

}  // namespace pickloop
