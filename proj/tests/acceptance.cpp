// End-to-end acceptance checks. Each check prints a single PASS/FAIL line;
// the process exits 0 only when every check passes.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pickloop/evaluate.hpp"
#include "pickloop/io.hpp"
#include "pickloop/model.hpp"
#include "pickloop/solver.hpp"
#include "pickloop/synth.hpp"
#include "support.hpp"

using namespace pickloop;
using namespace testsupport;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": "
            << title;
  if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

Solution exact(const MilpModel& model) {
  return solve_exact(model, exact_control());
}

// --- 1. objective combiner ------------------------------------------------

// Runs a recorded (part1, part2, alpha) triple through the same evaluation
// arithmetic used everywhere else: a one-SKU instance whose shelf distance
// is chosen so the efficiency part equals the given value.
bool combiner_case(double part1, double part2, double alpha, double expected,
                   std::string* detail) {
  Instance instance;
  instance.skus.push_back(make_sku("v", part1, 100, 50, 1.0));
  Layout layout;
  layout.n_stations = 1;
  layout.shelves.push_back(make_shelf("r", 1, 250, 100, 1.0 / part2));
  Solution solution;
  solution.placements = {{"v", "r"}};

  const ObjectiveParts parts =
      objective_parts(instance, layout, solution, alpha);
  if (std::abs(parts.combined - expected) >= 0.01) {
    char buffer[128];
    std::snprintf(buffer, sizeof(buffer), "%.4f vs %.4f", parts.combined,
                  expected);
    *detail = buffer;
    return false;
  }
  return true;
}

void criterion1() {
  std::string detail;
  const bool ok = combiner_case(26.56, 0.1864, 250.0, 73.165, &detail) &&
                  combiner_case(26.49, 0.1857, 250.0, 72.916, &detail);
  report(1, "objective combiner reproduces the reference totals within 0.01",
         ok, detail);
}

// --- 2. exact solver vs exhaustive oracle ----------------------------------

void criterion2() {
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 100 && ok; ++seed) {
    const Instance instance = tiny_instance(seed);
    const Layout layout = tiny_layout(seed);
    const SolveParams params = tiny_params(seed);
    const MilpModel model = build_integrated(instance, layout, params);

    const Solution reference = brute_force_oracle(model);
    const Solution candidate = exact(model);
    if (candidate.objective != reference.objective) {
      detail = "seed " + std::to_string(seed) + ": " +
               std::to_string(candidate.objective) + " vs " +
               std::to_string(reference.objective);
      ok = false;
      break;
    }
    if (!audit_assignment(instance, layout, candidate, params, false).empty()) {
      detail = "seed " + std::to_string(seed) + ": audit violation";
      ok = false;
    }
  }
  report(2, "branch-and-bound equals exhaustive enumeration on 100 instances",
         ok, detail);
}

// --- 3. integrated dominates the two-stage baseline -------------------------

double sequential_objective(const Instance& instance, const Layout& layout,
                            const SolveParams& params) {
  const Solution selection =
      exact(build_selection_stage(instance, layout, params));
  std::set<std::string> selected;
  for (const auto& [sku, shelf] : selection.placements) selected.insert(sku);
  return exact(build_assignment_stage(instance, layout, params, selected, true))
      .objective;
}

void criterion3() {
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed = 201; seed <= 225 && ok; ++seed) {
    const Instance instance = tiny_instance(seed);
    const Layout layout = tiny_layout(seed);
    const SolveParams params = tiny_params(seed);
    const double integrated =
        exact(build_integrated(instance, layout, params)).objective;
    const double sequential = sequential_objective(instance, layout, params);
    if (integrated < sequential - 1e-9) {
      detail = "seed " + std::to_string(seed) + ": integrated " +
               std::to_string(integrated) + " < sequential " +
               std::to_string(sequential);
      ok = false;
    }
  }

  // A pick-heavy SKU the score-only first stage skips: selecting B and C
  // wins on score (0.9 vs 0.6) but A alone carries nearly all the picks.
  Instance instance;
  instance.separator_gap_mm = 0;
  instance.skus.push_back(make_sku("A", 0.6, 100, 100, 100.0));
  instance.skus.push_back(make_sku("B", 0.5, 100, 50, 1.0));
  instance.skus.push_back(make_sku("C", 0.4, 100, 50, 1.0));
  Layout layout;
  layout.n_stations = 1;
  layout.shelves.push_back(make_shelf("r", 1, 250, 100, 1.0));
  SolveParams params = reference_params();

  const double integrated =
      exact(build_integrated(instance, layout, params)).objective;
  const double sequential = sequential_objective(instance, layout, params);
  if (ok && integrated <= sequential + 1e-9) {
    detail = "constructed instance not strict: " + std::to_string(integrated) +
             " vs " + std::to_string(sequential);
    ok = false;
  }
  report(3, "integrated objective dominates the sequential baseline", ok,
         detail);
}

// --- 4. day-robust model removes the weekday imbalance ----------------------

// Two Friday-peaked SKUs that fit everywhere and two Tuesday-peaked SKUs
// that fit only at station 2. Optimizing on averages packs the Friday pair
// into station 1; the per-day model keeps the week level instead.
struct PeakedFixture {
  Instance instance;
  Layout layout;
  SolveParams params;

  PeakedFixture() {
    instance.separator_gap_mm = 10;
    instance.skus.push_back(
        make_sku_days("F1", 0.5, 100, 100, {60, 60, 60, 60, 300, 60}));
    instance.skus.push_back(
        make_sku_days("F2", 0.5, 100, 100, {60, 60, 60, 60, 300, 60}));
    instance.skus.push_back(
        make_sku_days("T1", 0.002, 100, 250, {60, 300, 60, 60, 60, 60}));
    instance.skus.push_back(
        make_sku_days("T2", 0.002, 100, 250, {60, 300, 60, 60, 60, 60}));

    layout.n_stations = 2;
    layout.shelves.push_back(make_shelf("s1_a", 1, 250, 120, 1.0));
    layout.shelves.push_back(make_shelf("s1_b", 1, 250, 120, 1.0));
    layout.shelves.push_back(make_shelf("s2_a", 2, 250, 260, 1.1));
    layout.shelves.push_back(make_shelf("s2_b", 2, 250, 260, 1.1));

    params.alpha = 0.005;
    params.delta = 0.01;
    params.delta_day = 0.01;
    params.gap_target = 0.0;
  }
};

void criterion4() {
  std::string detail;
  bool ok = true;
  const PeakedFixture f;

  const Solution agnostic =
      exact(build_integrated(f.instance, f.layout, f.params));
  const auto day_violations =
      audit_assignment(f.instance, f.layout, agnostic, f.params, true);
  if (day_violations.empty()) {
    detail = "average-optimal solution already satisfies the per-day bound";
    ok = false;
  }

  const Solution robust = exact(build_robust(f.instance, f.layout, f.params));
  if (ok) {
    const StationWorkloads w =
        station_workloads(f.instance, f.layout, robust);
    const DeviationTable table = deviation_table(w.by_day);
    double max_dev = 0.0;
    for (int t = 0; t < kNumDays; ++t) {
      max_dev = std::max(max_dev, table.max_positive[t]);
      max_dev = std::max(max_dev, -table.max_negative[t]);
    }
    if (max_dev > 0.01) {
      detail = "robust per-day deviation " + std::to_string(max_dev);
      ok = false;
    }
  }
  if (ok) {
    const double loss =
        (agnostic.objective - robust.objective) / agnostic.objective;
    if (loss < 0.0 || loss >= 0.01) {
      detail = "objective loss " + std::to_string(loss);
      ok = false;
    }
  }
  report(4, "per-day model levels the week at under 1% objective cost", ok,
         detail);
}

// --- 5. per-day feasibility implies average feasibility ----------------------

void criterion5() {
  std::string detail;
  bool ok = true;
  for (std::uint64_t seed = 301; seed <= 400 && ok; ++seed) {
    const Instance instance = tiny_instance(seed);
    const Layout layout = tiny_layout(seed);
    SolveParams params = tiny_params(seed);
    params.delta = params.delta_day;

    const Solution robust = exact(build_robust(instance, layout, params));
    if (!audit_assignment(instance, layout, robust, params, false).empty()) {
      detail = "seed " + std::to_string(seed);
      ok = false;
    }
  }
  report(5, "per-day-balanced optima pass the average balance audit", ok,
         detail);
}

// --- 6. generator calibration ------------------------------------------------

void criterion6() {
  std::string detail;
  bool ok = true;
  const GeneratorConfig config;
  const CalibrationReport cal = calibration_report(generate_instance(config));

  auto expect = [&](const char* what, double value, double target,
                    double tolerance) {
    if (std::abs(value - target) > tolerance) {
      char buffer[128];
      std::snprintf(buffer, sizeof(buffer), "%s %.4f vs %.4f +/- %.3f", what,
                    value, target, tolerance);
      detail = buffer;
      ok = false;
    }
  };
  expect("log-score mean", cal.log_score_mean, -7.81, 0.1);
  expect("log-score sd", cal.log_score_sd, 2.34, 0.1);
  expect("tall-only fraction", cal.type2_only_frac, 0.174, 0.02);
  expect("score/picks correlation", cal.level_correlation, 0.718, 0.05);
  for (int t = 0; t < kNumDays && ok; ++t) {
    if (cal.day_shares[t] < 0.15 || cal.day_shares[t] > 0.18) {
      detail = std::string(kDayNames[t]) + " share " +
               std::to_string(cal.day_shares[t]);
      ok = false;
    }
  }
  report(6, "default generator hits its calibration targets", ok, detail);
}

// --- 7. audit isolates each constraint family --------------------------------

struct MutationFixture {
  Instance instance;
  Layout layout;

  MutationFixture() {
    instance.separator_gap_mm = 0;
    instance.skus.push_back(make_sku("A", 0.5, 100, 50, 50.0, 1));
    instance.skus.push_back(make_sku("T", 0.5, 300, 50, 0.0, 1));
    instance.skus.push_back(make_sku("B", 0.5, 100, 50, 50.0, 2));
    instance.skus.push_back(make_sku("C", 0.5, 100, 50, 50.0, 3));
    instance.skus.push_back(
        make_sku_days("D", 0.5, 100, 50, {0, 0, 0, 0, 36, 0}, 1));
    instance.skus.push_back(make_sku("W", 0.5, 100, 250, 0.0, 1));

    layout.n_stations = 3;
    layout.shelves.push_back(make_shelf("r1", 1, 250, 200, 1.0));
    layout.shelves.push_back(make_shelf("t1", 1, 450, 200, 1.0));
    layout.shelves.push_back(make_shelf("r2", 2, 250, 200, 1.5));
    layout.shelves.push_back(make_shelf("r3", 3, 250, 200, 2.0));
  }

  static Solution base() {
    Solution solution;
    solution.placements = {{"A", "r1"}, {"T", "t1"}, {"B", "r2"}, {"C", "r3"}};
    return solution;
  }

  static SolveParams loose() {
    SolveParams params;
    params.alpha = 1.0;
    params.delta = 1.0;
    params.delta_day = 1.0;
    return params;
  }
};

void criterion7() {
  std::string detail;
  bool ok = true;
  const MutationFixture f;

  auto run_case = [&](const char* family, const Solution& mutated,
                      const SolveParams& params, bool per_day) {
    if (!ok) return;
    const auto violations =
        audit_assignment(f.instance, f.layout, mutated, params, per_day);
    if (violations.size() != 1 || violations[0].rule != family) {
      detail = std::string(family) + ": got " +
               std::to_string(violations.size()) + " violation(s)" +
               (violations.empty() ? "" : ", first " + violations[0].rule);
      ok = false;
    }
  };

  if (!audit_assignment(f.instance, f.layout, f.base(), f.loose(), false)
           .empty() ||
      !audit_assignment(f.instance, f.layout, f.base(), f.loose(), true)
           .empty()) {
    detail = "base solution is not clean";
    ok = false;
  }

  Solution mutated = f.base();
  mutated.placements.push_back({"A", "t1"});
  run_case("assign_once", mutated, f.loose(), false);

  mutated = f.base();
  for (auto& [sku, shelf] : mutated.placements) {
    if (sku == "T") shelf = "r1";
  }
  run_case("height_fit", mutated, f.loose(), false);

  mutated = f.base();
  mutated.placements.push_back({"W", "r1"});
  run_case("capacity", mutated, f.loose(), false);

  mutated = f.base();
  for (auto& [sku, shelf] : mutated.placements) {
    if (sku == "C") shelf = "r1";
  }
  run_case("precedence", mutated, f.loose(), false);

  mutated = f.base();
  mutated.placements.push_back({"D", "r1"});
  SolveParams balance = f.loose();
  balance.delta = 0.06;
  run_case("balance", mutated, balance, false);

  SolveParams day_balance = f.loose();
  day_balance.delta_day = 0.2;
  run_case("balance", mutated, day_balance, true);

  report(7, "each constraint family is violated in isolation by its mutation",
         ok, detail);
}

// --- 8. determinism -----------------------------------------------------------

void criterion8() {
  std::string detail;
  bool ok = true;

  GeneratorConfig config;
  config.n_skus = 800;
  config.seed = 17;
  if (instance_to_json(generate_instance(config)) !=
      instance_to_json(generate_instance(config))) {
    detail = "generator output differs between runs";
    ok = false;
  }

  const Instance instance = tiny_instance(55);
  const Layout layout = tiny_layout(55);
  const SolveParams params = tiny_params(55);
  const MilpModel model = build_integrated(instance, layout, params);
  SolutionMeta meta;
  meta.mode = "integrated";
  meta.solver = "exact";
  meta.params = params;

  // Wall-clock runtime is the one legitimately noisy field.
  auto normalized = [&] {
    Solution solution = exact(model);
    solution.runtime_s = 0.0;
    return solution_to_json(solution, meta);
  };
  if (ok && normalized() != normalized()) {
    detail = "solver output differs between runs";
    ok = false;
  }
  report(8, "generator and exact solver are byte-deterministic per seed", ok,
         detail);
}

// --- 9. MPS export sanity ------------------------------------------------------

void criterion9() {
  std::string detail;
  bool ok = true;

  const MilpModel model = build_integrated(
      reference_instance(), reference_layout(), reference_params());
  const ModelStats stats = model_stats(model);

  std::ostringstream first;
  export_mps(model, first);
  std::ostringstream second;
  export_mps(model, second);
  if (first.str() != second.str()) {
    detail = "re-export differs";
    ok = false;
  }

  int row_lines = 0;
  int rhs_lines = 0;
  std::set<std::string> columns;
  std::string section;
  std::istringstream in(first.str());
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '*') continue;
    if (line[0] != ' ') {
      section = line.substr(0, line.find(' '));
      continue;
    }
    if (section == "ROWS" && line.find(" N  OBJ") == std::string::npos) {
      ++row_lines;
    } else if (section == "COLUMNS" &&
               line.find("'MARKER'") == std::string::npos) {
      std::istringstream fields(line);
      std::string column;
      fields >> column;
      columns.insert(column);
    } else if (section == "RHS") {
      ++rhs_lines;
    }
  }

  int expected_rhs = 0;
  for (const LinearRow& row : model.rows) {
    if (row.rhs != 0.0) ++expected_rhs;
  }
  int expected_rows = 0;
  for (const auto& [tag, count] : stats.rows_by_tag) expected_rows += count;

  if (ok && columns.size() != 6) {
    detail = "column count " + std::to_string(columns.size());
    ok = false;
  }
  if (ok && row_lines != expected_rows) {
    detail = "row count " + std::to_string(row_lines) + " vs " +
             std::to_string(expected_rows);
    ok = false;
  }
  if (ok && rhs_lines != expected_rhs) {
    detail = "rhs count " + std::to_string(rhs_lines) + " vs " +
             std::to_string(expected_rhs);
    ok = false;
  }
  report(9, "reference model exports 6 columns with matching row/RHS counts",
         ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  return failures == 0 ? 0 : 1;
}
