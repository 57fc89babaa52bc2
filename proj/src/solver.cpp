#include "pickloop/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pickloop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-7;

double row_tol(const LinearRow& row) {
  return kFeasTol * std::max(1.0, std::abs(row.rhs));
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Model interpretation shared by the oracle, the exact solver and the
// heuristic. x variables are grouped per SKU; workload variables are
// derived from their defining equality rows; precedence variables are
// handled as integer intervals implied by the rows on the current
// placement (rows whose x is 0 are vacuous in both precedence families).

struct XInfo {
  int var = -1;
  int station = 0;
  int rank = 0;
  double obj = 0.0;
  double weight = 0.0;  // coefficient in its capacity row
  int cap_row = -1;     // index into ModelView::cap_rows, -1 if none
};

struct SkuGroup {
  std::string sku_id;
  std::vector<int> xs;  // indices into ModelView::xs
  bool forced = false;
};

struct ModelView {
  const MilpModel* model = nullptr;
  std::vector<XInfo> xs;         // one per x variable, declaration order
  std::vector<int> var_to_x;     // variable index -> xs index or -1
  std::vector<SkuGroup> groups;  // declaration order of first appearance
  std::vector<int> cap_rows;     // rows tagged as capacity
  std::vector<double> cap_rhs;
  std::vector<int> z_def_rows;   // eq rows defining one z variable
  std::vector<int> z_check_rows; // rows over z variables only
  std::vector<int> y_rows;       // rows containing a y variable
  std::vector<int> plain_rows;   // everything else
  std::vector<int> y_vars;
  bool trivially_infeasible = false;  // e.g. forced row with no x columns
};

ModelView make_view(const MilpModel& model) {
  ModelView view;
  view.model = &model;
  view.var_to_x.assign(model.variables.size(), -1);
  std::map<std::string, int> group_index;
  for (int v = 0; v < static_cast<int>(model.variables.size()); ++v) {
    const Variable& var = model.variables[v];
    switch (var.sem.type) {
      case VarSemantic::Type::x: {
        XInfo info;
        info.var = v;
        info.station = var.sem.station;
        info.rank = var.sem.rank;
        info.obj = model.objective[v];
        view.var_to_x[v] = static_cast<int>(view.xs.size());
        auto it = group_index.find(var.sem.sku_id);
        if (it == group_index.end()) {
          it = group_index.emplace(var.sem.sku_id,
                                   static_cast<int>(view.groups.size())).first;
          view.groups.push_back({var.sem.sku_id, {}, false});
        }
        view.groups[it->second].xs.push_back(static_cast<int>(view.xs.size()));
        view.xs.push_back(info);
        break;
      }
      case VarSemantic::Type::y:
        view.y_vars.push_back(v);
        break;
      default:
        break;
    }
  }
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    const LinearRow& row = model.rows[r];
    bool has_y = false;
    int z_count = 0;
    double z_coeff = 0.0;
    int x_count = 0;
    for (const auto& [var, coeff] : row.coeffs) {
      const auto type = model.variables[var].sem.type;
      if (type == VarSemantic::Type::y) has_y = true;
      if (type == VarSemantic::Type::z_avg || type == VarSemantic::Type::z_day) {
        ++z_count;
        z_coeff = coeff;
      }
      if (type == VarSemantic::Type::x) ++x_count;
    }
    if (has_y) {
      view.y_rows.push_back(r);
    } else if (z_count == 1 && row.rel == Relation::eq && z_coeff != 0.0) {
      view.z_def_rows.push_back(r);
    } else if (z_count > 0) {
      view.z_check_rows.push_back(r);
    } else if (row.tag == tag::capacity) {
      view.cap_rows.push_back(r);
      view.cap_rhs.push_back(row.rhs);
      for (const auto& [var, coeff] : row.coeffs) {
        int x = view.var_to_x[var];
        if (x >= 0) {
          view.xs[x].weight = coeff;
          view.xs[x].cap_row = static_cast<int>(view.cap_rows.size()) - 1;
        }
      }
    } else {
      view.plain_rows.push_back(r);
      if (row.tag == tag::assign_forced) {
        if (x_count == 0) view.trivially_infeasible = true;
        for (const auto& [var, coeff] : row.coeffs) {
          int x = view.var_to_x[var];
          if (x >= 0) {
            for (SkuGroup& group : view.groups) {
              for (int gx : group.xs) {
                if (gx == x) group.forced = true;
              }
            }
            break;
          }
        }
      }
    }
  }
  return view;
}

// Values of every variable implied by a 0/1 x assignment: z variables are
// read off their defining rows, y variables stay unset (interval logic).
struct LeafCheck {
  bool feasible = false;
  std::vector<double> values;  // x and z filled in
};

LeafCheck check_leaf(const ModelView& view, const std::vector<char>& x_one) {
  const MilpModel& model = *view.model;
  LeafCheck result;
  result.values.assign(model.variables.size(), 0.0);
  for (std::size_t i = 0; i < view.xs.size(); ++i) {
    result.values[view.xs[i].var] = x_one[i] ? 1.0 : 0.0;
  }
  if (view.trivially_infeasible) return result;
  for (int r : view.z_def_rows) {
    const LinearRow& row = model.rows[r];
    int z_var = -1;
    double z_coeff = 0.0;
    double rest = 0.0;
    for (const auto& [var, coeff] : row.coeffs) {
      const auto type = model.variables[var].sem.type;
      if (type == VarSemantic::Type::z_avg || type == VarSemantic::Type::z_day) {
        z_var = var;
        z_coeff = coeff;
      } else {
        rest += coeff * result.values[var];
      }
    }
    result.values[z_var] = (row.rhs - rest) / z_coeff;
  }
  auto eval = [&](const LinearRow& row) {
    double lhs = 0.0;
    for (const auto& [var, coeff] : row.coeffs) lhs += coeff * result.values[var];
    return lhs;
  };
  auto row_ok = [&](const LinearRow& row) {
    const double lhs = eval(row);
    const double tol = row_tol(row);
    switch (row.rel) {
      case Relation::le: return lhs <= row.rhs + tol;
      case Relation::ge: return lhs >= row.rhs - tol;
      case Relation::eq: return std::abs(lhs - row.rhs) <= tol;
    }
    return false;
  };
  for (int r : view.plain_rows) {
    if (!row_ok(model.rows[r])) return result;
  }
  for (int r : view.cap_rows) {
    if (!row_ok(model.rows[r])) return result;
  }
  for (int r : view.z_check_rows) {
    if (!row_ok(model.rows[r])) return result;
  }
  // Interval feasibility for every y variable.
  std::map<int, std::pair<double, double>> intervals;
  for (int y : view.y_vars) {
    intervals[y] = {model.variables[y].lower, model.variables[y].upper};
  }
  for (int r : view.y_rows) {
    const LinearRow& row = model.rows[r];
    int y_var = -1;
    double y_coeff = 0.0;
    double rest = 0.0;
    for (const auto& [var, coeff] : row.coeffs) {
      if (model.variables[var].sem.type == VarSemantic::Type::y) {
        y_var = var;
        y_coeff = coeff;
      } else {
        rest += coeff * result.values[var];
      }
    }
    const double bound = (row.rhs - rest) / y_coeff;
    auto& [lo, hi] = intervals[y_var];
    const bool upper = (row.rel == Relation::le) == (y_coeff > 0.0);
    if (row.rel == Relation::eq) {
      lo = std::max(lo, bound);
      hi = std::min(hi, bound);
    } else if (upper) {
      hi = std::min(hi, bound);
    } else {
      lo = std::max(lo, bound);
    }
  }
  for (const auto& [y, interval] : intervals) {
    const double lo = std::ceil(interval.first - kFeasTol);
    const double hi = std::floor(interval.second + kFeasTol);
    if (lo > hi) return result;
  }
  result.feasible = true;
  return result;
}

// Objective of a leaf, summed in declaration order so that oracle, exact
// solver and heuristic agree bit for bit on identical placements.
double leaf_objective(const ModelView& view, const std::vector<char>& x_one) {
  double value = 0.0;
  for (std::size_t i = 0; i < view.xs.size(); ++i) {
    if (x_one[i]) value += view.xs[i].obj;
  }
  return value;
}

std::vector<std::pair<std::string, std::string>> leaf_placements(
    const ModelView& view, const std::vector<char>& x_one) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < view.xs.size(); ++i) {
    if (x_one[i]) {
      const VarSemantic& sem = view.model->variables[view.xs[i].var].sem;
      out.emplace_back(sem.sku_id, sem.shelf_id);
    }
  }
  return out;
}

// Aggregate fractional knapsack bound: every undecided SKU may take its
// best remaining coefficient, widths compete for the pooled residual
// shelf capacity. Valid upper bound for any completion of the node.
double knapsack_bound(const ModelView& view, const std::vector<char>& x_state,
                      const std::vector<char>& group_done,
                      const std::vector<double>& cap_residual) {
  // x_state: 0 free, 1 fixed one, 2 fixed zero.
  double capacity = 0.0;
  for (double residual : cap_residual) capacity += std::max(0.0, residual);
  struct Item {
    double value;
    double weight;
    int group;
  };
  std::vector<Item> items;
  for (std::size_t g = 0; g < view.groups.size(); ++g) {
    if (group_done[g]) continue;
    double best = -kInf;
    double weight = 0.0;
    for (int x : view.groups[g].xs) {
      if (x_state[x] != 0) continue;
      if (view.xs[x].obj > best) {
        best = view.xs[x].obj;
        weight = view.xs[x].weight;
      }
    }
    if (best <= 0.0) continue;  // skipping the SKU dominates
    if (weight <= 0.0) weight = 1e-9;
    items.push_back({best, weight, static_cast<int>(g)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    const double da = a.value / a.weight;
    const double db = b.value / b.weight;
    if (da != db) return da > db;
    return a.group < b.group;
  });
  double bound = 0.0;
  for (const Item& item : items) {
    if (capacity <= 0.0) break;
    if (item.weight <= capacity) {
      bound += item.value;
      capacity -= item.weight;
    } else {
      bound += item.value * (capacity / item.weight);
      capacity = 0.0;
    }
  }
  return bound;
}

Solution make_infeasible(double runtime_s) {
  Solution solution;
  solution.status = SolveStatus::infeasible;
  solution.objective = 0.0;
  solution.bound = 0.0;
  solution.gap = 0.0;
  solution.runtime_s = runtime_s;
  return solution;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exhaustive oracle.

Solution brute_force_oracle(const MilpModel& model, double max_candidates) {
  const auto start = Clock::now();
  ModelView view = make_view(model);
  double candidates = 1.0;
  for (const SkuGroup& group : view.groups) {
    candidates *= static_cast<double>(group.xs.size()) + 1.0;
    if (candidates > max_candidates) {
      throw std::runtime_error("instance too large for oracle");
    }
  }

  std::vector<char> x_one(view.xs.size(), 0);
  std::vector<double> cap_residual = view.cap_rhs;
  bool found = false;
  double best_value = -kInf;
  std::vector<char> best_leaf;

  auto leaf = [&]() {
    LeafCheck check = check_leaf(view, x_one);
    if (!check.feasible) return;
    const double value = leaf_objective(view, x_one);
    if (!found || value > best_value) {
      found = true;
      best_value = value;
      best_leaf = x_one;
    }
  };

  // Depth-first enumeration over per-SKU options; only the monotone
  // capacity rows are used to cut branches early.
  auto recurse = [&](auto&& self, std::size_t g) -> void {
    if (g == view.groups.size()) {
      leaf();
      return;
    }
    const SkuGroup& group = view.groups[g];
    if (!group.forced) self(self, g + 1);  // leave the SKU out
    for (int x : group.xs) {
      const XInfo& info = view.xs[x];
      if (info.cap_row >= 0 && cap_residual[info.cap_row] < info.weight - kFeasTol) {
        continue;
      }
      x_one[x] = 1;
      if (info.cap_row >= 0) cap_residual[info.cap_row] -= info.weight;
      self(self, g + 1);
      if (info.cap_row >= 0) cap_residual[info.cap_row] += info.weight;
      x_one[x] = 0;
    }
  };
  recurse(recurse, 0);

  if (!found) return make_infeasible(seconds_since(start));

  Solution solution;
  solution.placements = leaf_placements(view, best_leaf);
  solution.objective = best_value;
  solution.bound = best_value;
  solution.gap = 0.0;
  solution.status = SolveStatus::optimal;
  solution.runtime_s = seconds_since(start);
  return solution;
}

// ---------------------------------------------------------------------------
// Exact branch and bound.

Solution solve_exact(const MilpModel& model, const SolveControl& control) {
  const auto start = Clock::now();
  ModelView view = make_view(model);
  if (view.trivially_infeasible) return make_infeasible(seconds_since(start));

  const std::size_t n_x = view.xs.size();
  std::vector<char> x_state(n_x, 0);
  std::vector<char> group_done(view.groups.size(), 0);
  std::vector<char> group_placed(view.groups.size(), 0);
  std::vector<int> group_free(view.groups.size(), 0);
  std::vector<int> x_group(n_x, -1);
  for (std::size_t g = 0; g < view.groups.size(); ++g) {
    group_free[g] = static_cast<int>(view.groups[g].xs.size());
    for (int x : view.groups[g].xs) x_group[x] = static_cast<int>(g);
  }
  std::vector<double> cap_residual = view.cap_rhs;

  // Rows touching each x and a y variable, for incremental intervals.
  std::vector<std::vector<int>> y_rows_of_x(n_x);
  for (int r : view.y_rows) {
    for (const auto& [var, coeff] : model.rows[r].coeffs) {
      int x = view.var_to_x[var];
      if (x >= 0) y_rows_of_x[x].push_back(r);
    }
  }
  std::map<int, std::pair<double, double>> y_intervals;
  for (int y : view.y_vars) {
    y_intervals[y] = {model.variables[y].lower, model.variables[y].upper};
  }
  auto y_feasible = [&]() {
    for (const auto& [y, interval] : y_intervals) {
      if (std::ceil(interval.first - kFeasTol) >
          std::floor(interval.second + kFeasTol)) {
        return false;
      }
    }
    return true;
  };

  bool found = false;
  double incumbent = -kInf;
  std::vector<char> best_leaf;
  double pruned_bound = -kInf;  // max bound over gap-pruned subtrees
  bool timed_out = false;
  long long nodes = 0;

  std::vector<char> x_one(n_x, 0);

  // Picks contributed per x assignment, for load-aware branching.
  std::vector<double> x_load(n_x, 0.0);
  for (int r : view.z_def_rows) {
    for (const auto& [var, coeff] : model.rows[r].coeffs) {
      int x = view.var_to_x[var];
      if (x >= 0) x_load[x] += std::abs(coeff);
    }
  }
  int n_stations = 0;
  for (const XInfo& info : view.xs) n_stations = std::max(n_stations, info.station);
  std::vector<double> station_load(n_stations + 1, 0.0);

  // Warm start: a verified heuristic solution seeds the incumbent so
  // that gap pruning bites from the first node.
  if (!view.groups.empty()) {
    SolveControl warm_control = control;
    warm_control.time_limit_s = std::min(2.0, control.time_limit_s * 0.25);
    const Solution warm = solve_heuristic(model, warm_control);
    std::map<std::pair<std::string, std::string>, int> x_of_pair;
    for (std::size_t i = 0; i < n_x; ++i) {
      const VarSemantic& sem = model.variables[view.xs[i].var].sem;
      x_of_pair[{sem.sku_id, sem.shelf_id}] = static_cast<int>(i);
    }
    std::vector<char> warm_one(n_x, 0);
    bool known = true;
    for (const auto& placement : warm.placements) {
      auto it = x_of_pair.find(placement);
      if (it == x_of_pair.end()) {
        known = false;
        break;
      }
      warm_one[it->second] = 1;
    }
    if (known && check_leaf(view, warm_one).feasible) {
      found = true;
      incumbent = leaf_objective(view, warm_one);
      best_leaf = warm_one;
    }
  }

  auto prune_threshold = [&]() {
    if (!found) return -kInf;
    const double g = std::min(control.gap_target, 0.999999);
    return incumbent >= 0.0 ? incumbent / (1.0 - g) * (1.0 - 1e-12)
                            : incumbent * (1.0 - g);
  };

  auto recurse = [&](auto&& self) -> void {
    if (timed_out) return;
    if ((++nodes & 0xFF) == 0 && seconds_since(start) > control.time_limit_s) {
      timed_out = true;
    }
    bool complete = true;
    for (std::size_t g = 0; g < view.groups.size(); ++g) {
      if (!group_done[g]) {
        complete = false;
        break;
      }
    }
    if (complete) {
      for (std::size_t i = 0; i < n_x; ++i) x_one[i] = x_state[i] == 1;
      LeafCheck check = check_leaf(view, x_one);
      if (check.feasible) {
        const double value = leaf_objective(view, x_one);
        if (!found || value > incumbent) {
          found = true;
          incumbent = value;
          best_leaf = x_one;
        }
      }
      return;
    }

    double placed_value = 0.0;
    for (std::size_t i = 0; i < n_x; ++i) {
      if (x_state[i] == 1) placed_value += view.xs[i].obj;
    }
    const double node_bound =
        placed_value + knapsack_bound(view, x_state, group_done, cap_residual);
    if (found && node_bound <= prune_threshold()) {
      pruned_bound = std::max(pruned_bound, node_bound);
      return;
    }

    // Branch on the bound's critical variable: the best free x of the
    // first group that no longer fits fully (most fractional), falling
    // back to the best free x overall. Ties by objective then name.
    int branch_x = -1;
    {
      double capacity = 0.0;
      for (double residual : cap_residual) capacity += std::max(0.0, residual);
      struct Item {
        double value;
        double weight;
        int group;
        int x;
      };
      std::vector<Item> items;
      for (std::size_t g = 0; g < view.groups.size(); ++g) {
        if (group_done[g]) continue;
        int best_x = -1;
        for (int x : view.groups[g].xs) {
          if (x_state[x] != 0) continue;
          if (best_x < 0 || view.xs[x].obj > view.xs[best_x].obj) best_x = x;
        }
        if (best_x < 0) continue;
        items.push_back({view.xs[best_x].obj,
                         std::max(view.xs[best_x].weight, 1e-9),
                         static_cast<int>(g), best_x});
      }
      std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        const double da = a.value / a.weight;
        const double db = b.value / b.weight;
        if (da != db) return da > db;
        if (a.value != b.value) return a.value > b.value;
        return a.x < b.x;
      });
      int branch_group = -1;
      for (const Item& item : items) {
        if (item.weight > capacity) {
          branch_group = item.group;  // the fractional item
          branch_x = item.x;
          break;
        }
        capacity -= item.weight;
      }
      if (branch_group < 0 && !items.empty()) {
        branch_group = items.front().group;
        branch_x = items.front().x;
      }
      if (branch_group >= 0) {
        // Within the chosen SKU, dive into the least loaded station so
        // that the first leaves are close to balanced.
        for (int x : view.groups[branch_group].xs) {
          if (x_state[x] != 0) continue;
          const double load_x = station_load[view.xs[x].station];
          const double load_b = station_load[view.xs[branch_x].station];
          if (load_x < load_b ||
              (load_x == load_b && view.xs[x].obj > view.xs[branch_x].obj)) {
            branch_x = x;
          }
        }
      }
    }
    if (branch_x < 0) {
      // Remaining groups have no free x: mark them exhausted and recurse.
      std::vector<std::size_t> marked;
      for (std::size_t g = 0; g < view.groups.size(); ++g) {
        if (!group_done[g] && group_free[g] == 0) {
          group_done[g] = 1;
          marked.push_back(g);
        }
      }
      self(self);
      for (std::size_t g : marked) group_done[g] = 0;
      return;
    }

    const XInfo& info = view.xs[branch_x];
    const int g = x_group[branch_x];

    // x = 1 branch.
    bool cap_ok = info.cap_row < 0 ||
                  cap_residual[info.cap_row] >= info.weight - kFeasTol;
    if (cap_ok) {
      x_state[branch_x] = 1;
      station_load[info.station] += x_load[branch_x];
      if (info.cap_row >= 0) cap_residual[info.cap_row] -= info.weight;
      std::vector<char> other_states;
      for (int x : view.groups[g].xs) {
        other_states.push_back(x_state[x]);
        if (x != branch_x && x_state[x] == 0) {
          x_state[x] = 2;
          --group_free[g];
        }
      }
      const char was_done = group_done[g];
      group_done[g] = 1;
      group_placed[g] = 1;
      std::vector<std::pair<int, std::pair<double, double>>> saved;
      for (int r : y_rows_of_x[branch_x]) {
        const LinearRow& row = model.rows[r];
        int y_var = -1;
        double y_coeff = 0.0, rest = 0.0;
        for (const auto& [var, coeff] : row.coeffs) {
          if (model.variables[var].sem.type == VarSemantic::Type::y) {
            y_var = var;
            y_coeff = coeff;
          } else if (view.var_to_x[var] == branch_x) {
            rest += coeff;  // x = 1
          }
        }
        const double bound = (row.rhs - rest) / y_coeff;
        saved.push_back({y_var, y_intervals[y_var]});
        auto& [lo, hi] = y_intervals[y_var];
        const bool upper = (row.rel == Relation::le) == (y_coeff > 0.0);
        if (row.rel == Relation::eq) {
          lo = std::max(lo, bound);
          hi = std::min(hi, bound);
        } else if (upper) {
          hi = std::min(hi, bound);
        } else {
          lo = std::max(lo, bound);
        }
      }
      if (y_feasible()) self(self);
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        y_intervals[it->first] = it->second;
      }
      group_placed[g] = 0;
      group_done[g] = was_done;
      std::size_t idx = 0;
      for (int x : view.groups[g].xs) {
        if (x_state[x] != other_states[idx]) {
          x_state[x] = other_states[idx];
          if (x != branch_x) ++group_free[g];
        }
        ++idx;
      }
      x_state[branch_x] = 0;
      station_load[info.station] -= x_load[branch_x];
      if (info.cap_row >= 0) cap_residual[info.cap_row] += info.weight;
    }

    // x = 0 branch.
    x_state[branch_x] = 2;
    --group_free[g];
    const bool exhausted = group_free[g] == 0;
    if (exhausted) group_done[g] = 1;
    self(self);
    if (exhausted) group_done[g] = 0;
    ++group_free[g];
    x_state[branch_x] = 0;
  };

  recurse(recurse);

  const double runtime = seconds_since(start);
  if (!found) {
    if (timed_out) {
      Solution solution;
      solution.status = SolveStatus::time_limit;
      solution.objective = 0.0;
      std::vector<char> root_state(n_x, 0);
      std::vector<char> root_done(view.groups.size(), 0);
      solution.bound = std::max(
          {pruned_bound, 0.0,
           knapsack_bound(view, root_state, root_done, view.cap_rhs)});
      solution.gap = relative_gap(solution.objective, solution.bound);
      solution.runtime_s = runtime;
      return solution;
    }
    return make_infeasible(runtime);
  }

  Solution solution;
  solution.placements = leaf_placements(view, best_leaf);
  solution.objective = incumbent;
  solution.bound = std::max(incumbent, pruned_bound);
  if (timed_out) {
    // Abandoned subtrees are only bounded by the root relaxation.
    std::vector<char> root_state(n_x, 0);
    std::vector<char> root_done(view.groups.size(), 0);
    solution.bound = std::max(
        solution.bound, knapsack_bound(view, root_state, root_done, view.cap_rhs));
  }
  solution.gap = relative_gap(solution.objective, solution.bound);
  if (timed_out && solution.gap > control.gap_target) {
    solution.status = SolveStatus::time_limit;
  } else if (solution.gap <= 1e-12) {
    solution.gap = std::max(solution.gap, 0.0);
    solution.status = SolveStatus::optimal;
  } else {
    solution.status = SolveStatus::gap_reached;
  }
  solution.runtime_s = runtime;
  return solution;
}

// ---------------------------------------------------------------------------
// Construct-and-improve heuristic.

namespace {

// Incremental placement state that mirrors the model rows: capacity
// residuals per shelf, derived workload values, and rank/station counts
// for the precedence check.
struct HeuristicState {
  const ModelView* view;
  const MilpModel* model;
  std::vector<int> placed_x;  // per group, xs index or -1
  std::vector<double> cap_residual;
  std::vector<double> values;  // full variable vector (x and z maintained)
  double objective = 0.0;

  explicit HeuristicState(const ModelView& v)
      : view(&v),
        model(v.model),
        placed_x(v.groups.size(), -1),
        cap_residual(v.cap_rhs),
        values(v.model->variables.size(), 0.0) {}

  void apply(int group, int x, double direction) {
    const XInfo& info = view->xs[x];
    values[info.var] = direction > 0 ? 1.0 : 0.0;
    if (info.cap_row >= 0) cap_residual[info.cap_row] -= direction * info.weight;
    objective += direction * info.obj;
    placed_x[group] = direction > 0 ? x : -1;
    for (int r : view->z_def_rows) {
      const LinearRow& row = model->rows[r];
      for (const auto& [var, coeff] : row.coeffs) {
        if (var == info.var) {
          // Row is z + sum(c x) = rhs with z coefficient 1.
          int z_var = -1;
          double z_coeff = 0.0;
          for (const auto& [v2, c2] : row.coeffs) {
            const auto type = model->variables[v2].sem.type;
            if (type == VarSemantic::Type::z_avg ||
                type == VarSemantic::Type::z_day) {
              z_var = v2;
              z_coeff = c2;
            }
          }
          values[z_var] -= direction * coeff / z_coeff;
        }
      }
    }
  }

  bool balance_ok() const {
    for (int r : view->z_check_rows) {
      const LinearRow& row = model->rows[r];
      double lhs = 0.0;
      for (const auto& [var, coeff] : row.coeffs) lhs += coeff * values[var];
      const double tol = row_tol(row);
      if (row.rel == Relation::le && lhs > row.rhs + tol) return false;
      if (row.rel == Relation::ge && lhs < row.rhs - tol) return false;
      if (row.rel == Relation::eq && std::abs(lhs - row.rhs) > tol) return false;
    }
    return true;
  }

  bool precedence_ok() const {
    // max station of rank o must not exceed min station of the next
    // nonempty rank o+1 (rank gaps are unconstrained by the rows).
    std::map<int, std::pair<int, int>> span;  // rank -> (min, max) station
    for (std::size_t g = 0; g < placed_x.size(); ++g) {
      if (placed_x[g] < 0) continue;
      const XInfo& info = view->xs[placed_x[g]];
      auto it = span.find(info.rank);
      if (it == span.end()) {
        span[info.rank] = {info.station, info.station};
      } else {
        it->second.first = std::min(it->second.first, info.station);
        it->second.second = std::max(it->second.second, info.station);
      }
    }
    for (const auto& [rank, mm] : span) {
      auto next = span.find(rank + 1);
      if (next != span.end() && mm.second > next->second.first) return false;
    }
    return true;
  }

  bool forced_ok() const {
    for (std::size_t g = 0; g < placed_x.size(); ++g) {
      if (view->groups[g].forced && placed_x[g] < 0) return false;
    }
    return true;
  }

  bool feasible() const { return balance_ok() && precedence_ok() && forced_ok(); }

  bool can_place(int x) const {
    const XInfo& info = view->xs[x];
    return info.cap_row < 0 ||
           cap_residual[info.cap_row] >= info.weight - kFeasTol;
  }
};

}  // namespace

Solution solve_heuristic(const MilpModel& model, const SolveControl& control) {
  const auto start = Clock::now();
  ModelView view = make_view(model);
  if (view.trivially_infeasible) return make_infeasible(seconds_since(start));

  HeuristicState state(view);

  // Per-station summed workload values, used to steer construction and
  // repair toward balance.
  std::vector<std::vector<int>> z_vars_of_station;
  for (int v = 0; v < static_cast<int>(model.variables.size()); ++v) {
    const VarSemantic& sem = model.variables[v].sem;
    if (sem.type == VarSemantic::Type::z_avg ||
        sem.type == VarSemantic::Type::z_day) {
      if (sem.station > static_cast<int>(z_vars_of_station.size())) {
        z_vars_of_station.resize(sem.station);
      }
      z_vars_of_station[sem.station - 1].push_back(v);
    }
  }
  auto station_load = [&](int station) {
    double load = 0.0;
    if (station >= 1 && station <= static_cast<int>(z_vars_of_station.size())) {
      for (int v : z_vars_of_station[station - 1]) load += state.values[v];
    }
    return load;
  };

  std::vector<int> order(view.groups.size());
  std::iota(order.begin(), order.end(), 0);
  auto density = [&](int g) {
    double best = 0.0;
    for (int x : view.groups[g].xs) {
      const XInfo& info = view.xs[x];
      best = std::max(best, info.obj / std::max(info.weight, 1e-9));
    }
    return best;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return density(a) > density(b); });

  auto pairs_by_value = [&](int g) {
    std::vector<int> xs = view.groups[g].xs;
    std::stable_sort(xs.begin(), xs.end(), [&](int a, int b) {
      return view.xs[a].obj > view.xs[b].obj;
    });
    return xs;
  };

  // Best feasible state seen at any point, captured because tight balance
  // bounds can make later repair overshoot past good intermediate states.
  bool have_snapshot = false;
  double snapshot_value = -kInf;
  std::vector<int> snapshot;
  auto take_snapshot = [&]() {
    if (state.feasible() && state.objective > snapshot_value) {
      have_snapshot = true;
      snapshot_value = state.objective;
      snapshot = state.placed_x;
    }
  };

  // Construction: SKUs by value density; shelves by station load (fill
  // the lightest station first), then by coefficient.
  take_snapshot();
  for (int g : order) {
    std::vector<int> xs = pairs_by_value(g);
    std::stable_sort(xs.begin(), xs.end(), [&](int a, int b) {
      return station_load(view.xs[a].station) < station_load(view.xs[b].station);
    });
    for (int x : xs) {
      if (!state.can_place(x)) continue;
      state.apply(g, x, +1.0);
      if (state.precedence_ok()) break;
      state.apply(g, x, -1.0);
    }
    take_snapshot();
  }

  // Repair: relocate from the most loaded to the least loaded station
  // when that reduces the total balance violation, otherwise drop the
  // cheapest placement from the most loaded station.
  auto imbalance = [&]() {
    double total = 0.0;
    for (int r : view.z_check_rows) {
      const LinearRow& row = model.rows[r];
      double lhs = 0.0;
      for (const auto& [var, coeff] : row.coeffs) lhs += coeff * state.values[var];
      if (row.rel == Relation::le) total += std::max(0.0, lhs - row.rhs);
      if (row.rel == Relation::ge) total += std::max(0.0, row.rhs - lhs);
      if (row.rel == Relation::eq) total += std::abs(lhs - row.rhs);
    }
    return total;
  };
  long long guard = 16 * static_cast<long long>(view.groups.size()) + 64;
  while (!state.balance_ok() && guard-- > 0 &&
         seconds_since(start) < control.time_limit_s) {
    double max_load = -kInf;
    int max_station = -1;
    for (int k = 1; k <= static_cast<int>(z_vars_of_station.size()); ++k) {
      if (station_load(k) > max_load) {
        max_load = station_load(k);
        max_station = k;
      }
    }
    const double before = imbalance();
    int best_g = -1, best_x = -1;
    double best_after = before;
    for (std::size_t g = 0; g < state.placed_x.size(); ++g) {
      const int current = state.placed_x[g];
      if (current < 0 || view.xs[current].station != max_station) continue;
      for (int x : view.groups[g].xs) {
        if (view.xs[x].station == max_station) continue;
        state.apply(static_cast<int>(g), current, -1.0);
        if (state.can_place(x)) {
          state.apply(static_cast<int>(g), x, +1.0);
          if (state.precedence_ok()) {
            const double after = imbalance();
            if (after < best_after - 1e-12) {
              best_after = after;
              best_g = static_cast<int>(g);
              best_x = x;
            }
          }
          state.apply(static_cast<int>(g), x, -1.0);
        }
        state.apply(static_cast<int>(g), current, +1.0);
      }
    }
    if (best_g >= 0) {
      state.apply(best_g, state.placed_x[best_g], -1.0);
      state.apply(best_g, best_x, +1.0);
      take_snapshot();
      continue;
    }
    int worst_group = -1;
    double worst_key = kInf;
    for (std::size_t g = 0; g < state.placed_x.size(); ++g) {
      if (state.placed_x[g] < 0 || view.groups[g].forced) continue;
      const XInfo& info = view.xs[state.placed_x[g]];
      if (info.station != max_station) continue;
      if (info.obj < worst_key) {
        worst_key = info.obj;
        worst_group = static_cast<int>(g);
      }
    }
    if (worst_group < 0) {
      for (std::size_t g = 0; g < state.placed_x.size(); ++g) {
        if (state.placed_x[g] < 0 || view.groups[g].forced) continue;
        const XInfo& info = view.xs[state.placed_x[g]];
        if (info.obj < worst_key) {
          worst_key = info.obj;
          worst_group = static_cast<int>(g);
        }
      }
    }
    if (worst_group < 0) break;
    state.apply(worst_group, state.placed_x[worst_group], -1.0);
    take_snapshot();
  }
  if (!state.feasible() && have_snapshot) {
    // Fall back to the best feasible snapshot before improving.
    for (std::size_t g = 0; g < state.placed_x.size(); ++g) {
      if (state.placed_x[g] >= 0) {
        state.apply(static_cast<int>(g), state.placed_x[g], -1.0);
      }
    }
    for (std::size_t g = 0; g < snapshot.size(); ++g) {
      if (snapshot[g] >= 0) state.apply(static_cast<int>(g), snapshot[g], +1.0);
    }
  }

  // Local search: insert, relocate, swap, eject-and-reinsert. Only
  // feasibility-preserving strictly improving moves are accepted.
  const double improve_tol = 1e-12;
  bool improved = true;
  while (improved && seconds_since(start) < control.time_limit_s) {
    improved = false;
    // Insert unplaced SKUs.
    for (int g : order) {
      if (state.placed_x[g] >= 0) continue;
      for (int x : pairs_by_value(g)) {
        if (view.xs[x].obj <= improve_tol || !state.can_place(x)) continue;
        state.apply(g, x, +1.0);
        if (state.feasible()) {
          improved = true;
          break;
        }
        state.apply(g, x, -1.0);
      }
    }
    // Relocate placed SKUs to better shelves.
    for (int g : order) {
      const int current = state.placed_x[g];
      if (current < 0) continue;
      for (int x : pairs_by_value(g)) {
        if (x == current) break;  // sorted by value: no gain past current
        const double gain = view.xs[x].obj - view.xs[current].obj;
        if (gain <= improve_tol) break;
        state.apply(g, current, -1.0);
        if (state.can_place(x)) {
          state.apply(g, x, +1.0);
          if (state.feasible()) {
            improved = true;
            break;
          }
          state.apply(g, x, -1.0);
        }
        state.apply(g, current, +1.0);
      }
    }
    // Pairwise swap of shelves.
    for (std::size_t ga = 0; ga + 1 < view.groups.size(); ++ga) {
      const int xa = state.placed_x[ga];
      if (xa < 0) continue;
      for (std::size_t gb = ga + 1; gb < view.groups.size(); ++gb) {
        const int xb = state.placed_x[gb];
        if (xb < 0) continue;
        int xa_new = -1, xb_new = -1;
        for (int x : view.groups[ga].xs) {
          if (view.model->variables[view.xs[x].var].sem.shelf_id ==
              view.model->variables[view.xs[xb].var].sem.shelf_id) {
            xa_new = x;
          }
        }
        for (int x : view.groups[gb].xs) {
          if (view.model->variables[view.xs[x].var].sem.shelf_id ==
              view.model->variables[view.xs[xa].var].sem.shelf_id) {
            xb_new = x;
          }
        }
        if (xa_new < 0 || xb_new < 0) continue;
        const double gain = view.xs[xa_new].obj + view.xs[xb_new].obj -
                            view.xs[xa].obj - view.xs[xb].obj;
        if (gain <= improve_tol) continue;
        state.apply(static_cast<int>(ga), xa, -1.0);
        state.apply(static_cast<int>(gb), xb, -1.0);
        if (state.can_place(xa_new)) {
          state.apply(static_cast<int>(ga), xa_new, +1.0);
          if (state.can_place(xb_new)) {
            state.apply(static_cast<int>(gb), xb_new, +1.0);
            if (state.feasible()) {
              improved = true;
              break;
            }
            state.apply(static_cast<int>(gb), xb_new, -1.0);
          }
          state.apply(static_cast<int>(ga), xa_new, -1.0);
        }
        state.apply(static_cast<int>(ga), xa, +1.0);
        state.apply(static_cast<int>(gb), xb, +1.0);
      }
      if (improved) break;
    }
    // Eject a placed SKU to admit a more valuable unplaced one.
    for (int g : order) {
      if (state.placed_x[g] >= 0) continue;
      bool accepted = false;
      for (int x : pairs_by_value(g)) {
        for (std::size_t ge = 0; ge < view.groups.size(); ++ge) {
          const int xe = state.placed_x[ge];
          if (xe < 0 || view.groups[ge].forced) continue;
          const double gain = view.xs[x].obj - view.xs[xe].obj;
          if (gain <= improve_tol) continue;
          state.apply(static_cast<int>(ge), xe, -1.0);
          if (state.can_place(x)) {
            state.apply(g, x, +1.0);
            if (state.feasible()) {
              accepted = true;
              improved = true;
              break;
            }
            state.apply(g, x, -1.0);
          }
          state.apply(static_cast<int>(ge), xe, +1.0);
        }
        if (accepted) break;
      }
    }
  }

  // Final audit against the full row set; the pre-repair snapshot wins if
  // the repaired-and-improved state ended up below it.
  std::vector<char> x_one(view.xs.size(), 0);
  const bool use_snapshot = have_snapshot && snapshot_value > state.objective;
  const std::vector<int>& final_placed = use_snapshot ? snapshot : state.placed_x;
  for (std::size_t g = 0; g < final_placed.size(); ++g) {
    if (final_placed[g] >= 0) x_one[final_placed[g]] = 1;
  }
  LeafCheck check = check_leaf(view, x_one);
  const double runtime = seconds_since(start);
  if (!check.feasible) {
    Solution solution = make_infeasible(runtime);
    solution.status = SolveStatus::time_limit;  // no clean solution found
    return solution;
  }

  Solution solution;
  solution.placements = leaf_placements(view, x_one);
  solution.objective = leaf_objective(view, x_one);
  std::vector<char> root_state(view.xs.size(), 0);
  std::vector<char> root_done(view.groups.size(), 0);
  solution.bound = std::max(
      solution.objective,
      knapsack_bound(view, root_state, root_done, view.cap_rhs));
  solution.gap = relative_gap(solution.objective, solution.bound);
  solution.status = solution.gap <= control.gap_target
                        ? (solution.gap <= 1e-12 ? SolveStatus::optimal
                                                 : SolveStatus::gap_reached)
                        : SolveStatus::time_limit;
  solution.runtime_s = runtime;
  return solution;
}

Solution solve(const MilpModel& model, const SolveControl& control) {
  switch (control.mode) {
    case SolveMode::exact: return solve_exact(model, control);
    case SolveMode::heuristic: return solve_heuristic(model, control);
    case SolveMode::oracle: return brute_force_oracle(model);
  }
  throw std::logic_error("unknown solve mode");
}

// ---------------------------------------------------------------------------
// MPS export.

namespace {

std::string mps_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string field(const std::string& text, std::size_t width) {
  std::string out = text;
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::size_t export_mps(const MilpModel& model, std::ostream& out,
                       const std::string& name) {
  std::ostringstream buffer;
  buffer << "* Maximization problem: objective coefficients are negated so\n"
         << "* that minimizing readers reproduce the same optimum.\n";
  buffer << "NAME          " << name << "\n";

  auto row_name = [](int r) {
    char b[16];
    std::snprintf(b, sizeof(b), "R%07d", r + 1);
    return std::string(b);
  };
  auto col_name = [](int c) {
    char b[16];
    std::snprintf(b, sizeof(b), "C%07d", c + 1);
    return std::string(b);
  };

  buffer << "ROWS\n";
  buffer << " N  OBJ\n";
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    char rel = 'L';
    if (model.rows[r].rel == Relation::ge) rel = 'G';
    if (model.rows[r].rel == Relation::eq) rel = 'E';
    buffer << " " << rel << "  " << row_name(r) << "\n";
  }

  // Column-major entries in declaration order.
  std::vector<std::vector<std::pair<int, double>>> col_entries(
      model.variables.size());
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    for (const auto& [var, coeff] : model.rows[r].coeffs) {
      col_entries[var].push_back({r, coeff});
    }
  }

  buffer << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  auto set_integer_block = [&](bool want) {
    if (want == in_integer_block) return;
    ++marker;
    char b[16];
    std::snprintf(b, sizeof(b), "M%07d", marker);
    buffer << "    " << field(b, 10)
           << field("'MARKER'", 25 - 14) << "'"
           << (want ? "INTORG" : "INTEND") << "'\n";
    in_integer_block = want;
  };
  for (int c = 0; c < static_cast<int>(model.variables.size()); ++c) {
    const Variable& var = model.variables[c];
    set_integer_block(var.kind != VarKind::continuous);
    bool wrote = false;
    if (model.objective[c] != 0.0) {
      buffer << "    " << field(col_name(c), 10) << field("OBJ", 10)
             << mps_number(-model.objective[c]) << "\n";
      wrote = true;
    }
    for (const auto& [r, coeff] : col_entries[c]) {
      buffer << "    " << field(col_name(c), 10) << field(row_name(r), 10)
             << mps_number(coeff) << "\n";
      wrote = true;
    }
    if (!wrote) {
      buffer << "    " << field(col_name(c), 10) << field("OBJ", 10) << "0\n";
    }
  }
  set_integer_block(false);

  buffer << "RHS\n";
  for (int r = 0; r < static_cast<int>(model.rows.size()); ++r) {
    if (model.rows[r].rhs != 0.0) {
      buffer << "    " << field("RHS", 10) << field(row_name(r), 10)
             << mps_number(model.rows[r].rhs) << "\n";
    }
  }

  buffer << "BOUNDS\n";
  for (int c = 0; c < static_cast<int>(model.variables.size()); ++c) {
    const Variable& var = model.variables[c];
    if (var.kind == VarKind::binary) {
      buffer << " BV " << field("BND", 10) << col_name(c) << "\n";
    } else if (var.kind == VarKind::integer_) {
      buffer << " LI " << field("BND", 10) << field(col_name(c), 10)
             << mps_number(var.lower) << "\n";
      buffer << " UI " << field("BND", 10) << field(col_name(c), 10)
             << mps_number(var.upper) << "\n";
    }
    // Continuous workload variables keep the default [0, +inf) bounds.
  }
  buffer << "ENDATA\n";

  const std::string text = buffer.str();
  out << text;
  return text.size();
}

std::size_t export_mps_file(const MilpModel& model, const std::string& path,
                            const std::string& name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::size_t bytes = export_mps(model, out, name);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
  return bytes;
}

}  // namespace pickloop
