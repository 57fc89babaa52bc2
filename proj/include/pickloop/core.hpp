#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace pickloop {

inline constexpr int kNumDays = 6;
inline constexpr std::array<const char*, kNumDays> kDayNames = {
    "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};

inline constexpr int kMinRank = 1;
inline constexpr int kMaxRank = 3;

/// One product variant with fixed physical dimensions and demand statistics.
/// width_mm is the width of the full target stock, not of a single unit.
struct Sku {
  std::string id;
  double score = 0.0;   // importance score, in (0, 1]
  int height_mm = 0;
  int width_mm = 0;
  double picks_avg = 0.0;                     // mean of picks_by_day
  std::array<double, kNumDays> picks_by_day{};  // Monday-first
  int rank = 1;                               // precedence rank, 1..3
};

struct Instance {
  std::vector<Sku> skus;
  int separator_gap_mm = 0;
};

/// A broken rule, reported as data. `rule` is a stable machine-readable
/// code, `subject` names the offending SKU/shelf/station.
struct Violation {
  std::string rule;
  std::string subject;
  std::string detail;
};

enum class SolveStatus { optimal, gap_reached, time_limit, infeasible };

const char* to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& name);

/// Assignment of SKUs to shelves plus solve metadata. Unselected SKUs are
/// simply absent. Kept as a pair list (not a map) so that audits can
/// represent and flag duplicate placements.
struct Solution {
  std::vector<std::pair<std::string, std::string>> placements;  // sku -> shelf
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  SolveStatus status = SolveStatus::optimal;
};

/// Relative gap between incumbent and bound for a maximization problem.
double relative_gap(double objective, double bound);

struct Shelf;
struct Layout;

std::vector<Violation> validate_instance(const Instance& instance);

/// Total width demand, separator gaps included, of all SKUs with rank
/// strictly below the indexed rank. Index 1..3; index 0 unused.
using RankWidthTable = std::array<double, kMaxRank + 2>;

RankWidthTable rank_prefix_widths(const Instance& instance);

/// Shelves that can hold the SKU: height and width must fit, and stations
/// whose preceding cumulative shelf width cannot absorb the lower-rank
/// demand are pruned for this SKU's rank. Pass a zero table to skip the
/// rank pruning. Returns indices into layout.shelves, in layout order.
std::vector<int> eligible_shelves(const Sku& sku, const Layout& layout,
                                  const RankWidthTable& width_below_rank,
                                  int separator_gap_mm);

std::vector<int> eligible_shelves(const Sku& sku, const Layout& layout);

/// Sum of picks_avg over the whole catalogue. Throws on a zero sum, where
/// the efficiency part of the objective is undefined.
double total_picks(const Instance& instance);

}  // namespace pickloop
