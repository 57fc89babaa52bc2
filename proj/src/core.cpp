#include "pickloop/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "pickloop/layout.hpp"

namespace pickloop {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_reached: return "gap_reached";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& name) {
  if (name == "optimal") return SolveStatus::optimal;
  if (name == "gap_reached") return SolveStatus::gap_reached;
  if (name == "time_limit") return SolveStatus::time_limit;
  if (name == "infeasible") return SolveStatus::infeasible;
  throw std::invalid_argument("unknown solve status: " + name);
}

double relative_gap(double objective, double bound) {
  constexpr double eps = 1e-12;
  return (bound - objective) / std::max(std::abs(bound), eps);
}

std::vector<Violation> validate_instance(const Instance& instance) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const Sku& sku : instance.skus) {
    if (!seen.insert(sku.id).second) {
      out.push_back({"duplicate_id", sku.id, "sku id appears more than once"});
    }
    if (!(sku.score > 0.0 && sku.score <= 1.0)) {
      out.push_back({"score_range", sku.id,
                     "score must be in (0,1], got " + std::to_string(sku.score)});
    }
    if (sku.height_mm <= 0) {
      out.push_back({"height_positive", sku.id, "height_mm must be positive"});
    }
    if (sku.width_mm <= 0) {
      out.push_back({"width_positive", sku.id, "width_mm must be positive"});
    }
    if (sku.rank < kMinRank || sku.rank > kMaxRank) {
      out.push_back({"rank_range", sku.id,
                     "rank must be in {1,2,3}, got " + std::to_string(sku.rank)});
    }
    bool day_negative = false;
    double day_sum = 0.0;
    for (double p : sku.picks_by_day) {
      if (p < 0.0) day_negative = true;
      day_sum += p;
    }
    if (day_negative) {
      out.push_back({"picks_day_negative", sku.id, "picks_by_day must be >= 0"});
    }
    if (sku.picks_avg < 0.0) {
      out.push_back({"picks_avg_negative", sku.id, "picks_avg must be >= 0"});
    } else {
      const double mean = day_sum / kNumDays;
      const double scale = std::max({std::abs(mean), std::abs(sku.picks_avg), 1.0});
      if (std::abs(mean - sku.picks_avg) > 1e-9 * scale) {
        out.push_back({"picks_avg_mismatch", sku.id,
                       "picks_avg != mean(picks_by_day)"});
      }
    }
  }
  if (instance.separator_gap_mm < 0) {
    out.push_back({"gap_negative", "instance", "separator_gap_mm must be >= 0"});
  }
  return out;
}

RankWidthTable rank_prefix_widths(const Instance& instance) {
  RankWidthTable table{};
  std::array<double, kMaxRank + 1> demand{};
  for (const Sku& sku : instance.skus) {
    if (sku.rank >= kMinRank && sku.rank <= kMaxRank) {
      demand[sku.rank] += sku.width_mm + instance.separator_gap_mm;
    }
  }
  for (int rank = kMinRank; rank <= kMaxRank + 1; ++rank) {
    table[rank] = table[rank - 1];
    if (rank - 1 >= kMinRank) table[rank] += demand[rank - 1];
  }
  return table;
}

std::vector<int> eligible_shelves(const Sku& sku, const Layout& layout,
                                  const RankWidthTable& width_below_rank,
                                  int separator_gap_mm) {
  // Cumulative shelf width (gap included, matching the capacity rows)
  // up to and including each station.
  std::vector<double> cum_capacity(layout.n_stations + 1, 0.0);
  for (const Shelf& shelf : layout.shelves) {
    cum_capacity[shelf.station] += shelf.width_mm + separator_gap_mm;
  }
  for (int k = 1; k <= layout.n_stations; ++k) {
    cum_capacity[k] += cum_capacity[k - 1];
  }
  const double demand_below =
      (sku.rank >= kMinRank && sku.rank <= kMaxRank) ? width_below_rank[sku.rank]
                                                     : 0.0;
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(layout.shelves.size()); ++i) {
    const Shelf& shelf = layout.shelves[i];
    if (sku.height_mm > shelf.height_mm) continue;
    if (sku.width_mm > shelf.width_mm) continue;
    // Lower-rank SKUs overflow every station up to k, so rank o cannot
    // appear there: prune station k when demand(<o) > capacity(1..k).
    if (demand_below > cum_capacity[shelf.station]) continue;
    out.push_back(i);
  }
  return out;
}

std::vector<int> eligible_shelves(const Sku& sku, const Layout& layout) {
  return eligible_shelves(sku, layout, RankWidthTable{}, 0);
}

double total_picks(const Instance& instance) {
  double sum = 0.0;
  for (const Sku& sku : instance.skus) sum += sku.picks_avg;
  if (sum <= 0.0) {
    throw std::domain_error("zero total picks: efficiency objective undefined");
  }
  return sum;
}

}  // namespace pickloop
