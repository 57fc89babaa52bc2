#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "pickloop/core.hpp"
#include "pickloop/evaluate.hpp"
#include "pickloop/io.hpp"
#include "pickloop/layout.hpp"
#include "pickloop/model.hpp"
#include "pickloop/solver.hpp"
#include "pickloop/synth.hpp"

namespace {

using namespace pickloop;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

struct CliError {
  int code;
  std::string message;
};

struct Options {
  // Shared solve parameters.
  std::string mode = "integrated";
  std::string solver = "exact";
  SolveParams params;
  bool per_day = false;

  // Generator.
  int n_skus = 4693;
  int stations = 8;
  int workers = 1;

  // Paths.
  std::string instance_path;
  std::string layout_path;
  std::string solution_path;
  std::string out = ".";
};

Instance load_instance(const std::string& path) {
  try {
    return read_instance(path);
  } catch (const std::exception& e) {
    throw CliError{kExitIo, std::string("instance: ") + e.what()};
  }
}

Layout load_layout(const Options& opt) {
  if (opt.layout_path.empty()) {
    return scale_layout(opt.stations, default_station_pattern());
  }
  try {
    return read_layout(opt.layout_path);
  } catch (const std::exception& e) {
    throw CliError{kExitIo, std::string("layout: ") + e.what()};
  }
}

void check_valid(const std::vector<Violation>& violations,
                 const std::string& what) {
  if (!violations.empty()) {
    throw CliError{kExitUsage, what + ": " + violations.front().rule + " (" +
                                   violations.front().detail + ")"};
  }
}

void write_file(const std::string& path, const std::string& content) {
  try {
    write_text_file(path, content);
  } catch (const std::exception& e) {
    throw CliError{kExitIo, e.what()};
  }
}

SolveControl make_control(const Options& opt) {
  SolveControl control;
  if (opt.solver == "exact") {
    control.mode = SolveMode::exact;
  } else if (opt.solver == "heuristic") {
    control.mode = SolveMode::heuristic;
  } else if (opt.solver == "oracle") {
    control.mode = SolveMode::oracle;
  }
  control.gap_target = opt.params.gap_target;
  control.time_limit_s = opt.params.time_limit_s;
  control.seed = opt.params.seed;
  control.workers = opt.workers;
  return control;
}

MilpModel build_for_mode(const Options& opt, const Instance& instance,
                         const Layout& layout) {
  if (opt.mode == "robust") return build_robust(instance, layout, opt.params);
  if (opt.mode == "sequential") {
    return build_selection_stage(instance, layout, opt.params);
  }
  return build_integrated(instance, layout, opt.params);
}

Solution run_solver(const MilpModel& model, const SolveControl& control) {
  try {
    return solve(model, control);
  } catch (const std::exception& e) {
    throw CliError{kExitUsage, e.what()};
  }
}

int cmd_generate(const Options& opt) {
  namespace fs = std::filesystem;
  const fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);

  Instance instance;
  if (opt.n_skus > 0) {
    GeneratorConfig config;
    config.n_skus = opt.n_skus;
    config.seed = opt.params.seed;
    config.separator_gap_mm = 10;
    check_valid(validate_config(config), "generator config");
    instance = generate_instance(config);
  } else {
    instance.separator_gap_mm = 10;
  }
  const Layout layout = scale_layout(opt.stations, default_station_pattern());

  write_file((dir / "instance.json").string(), instance_to_json(instance));
  write_file((dir / "layout.json").string(), layout_to_json(layout));
  if (!instance.skus.empty()) {
    write_file((dir / "calibration.csv").string(),
               calibration_report_csv(calibration_report(instance)));
  }
  std::cout << "generated " << instance.skus.size() << " SKUs, "
            << layout.shelves.size() << " shelves -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_solve(const Options& opt) {
  const Instance instance = load_instance(opt.instance_path);
  check_valid(validate_instance(instance), "instance");
  const Layout layout = load_layout(opt);
  check_valid(validate_layout(layout), "layout");

  std::string out = opt.out;
  if (out == ".") out = opt.solver == "export" ? "model.mps" : "solution.json";

  if (opt.solver == "export") {
    const MilpModel model = build_for_mode(opt, instance, layout);
    std::size_t bytes = 0;
    try {
      bytes = export_mps_file(model, out);
    } catch (const std::exception& e) {
      throw CliError{kExitIo, e.what()};
    }
    std::cout << "wrote " << bytes << " bytes of MPS -> " << out << "\n";
    return kExitOk;
  }

  const SolveControl control = make_control(opt);
  SolutionMeta meta;
  meta.mode = opt.mode;
  meta.solver = opt.solver;
  meta.params = opt.params;

  Solution solution;
  if (opt.mode == "sequential") {
    const MilpModel stage1 = build_selection_stage(instance, layout, opt.params);
    const Solution selection = run_solver(stage1, control);
    if (selection.status == SolveStatus::infeasible) {
      std::cerr << "selection stage infeasible\n";
      return kExitInfeasible;
    }
    std::set<std::string> selected;
    for (const auto& [sku, shelf] : selection.placements) selected.insert(sku);
    std::cout << "stage 1 objective " << selection.objective << " ("
              << selected.size() << " SKUs selected)\n";
    const MilpModel stage2 = build_assignment_stage(instance, layout, opt.params,
                                                    selected, true);
    solution = run_solver(stage2, control);
    solution.runtime_s += selection.runtime_s;
    std::cout << "stage 2 objective " << solution.objective << "\n";
  } else {
    const MilpModel model = build_for_mode(opt, instance, layout);
    solution = run_solver(model, control);
  }

  write_file(out, solution_to_json(solution, meta));
  std::cout << "status " << to_string(solution.status) << ", objective "
            << solution.objective << ", bound " << solution.bound << ", gap "
            << solution.gap << " -> " << out << "\n";
  return solution.status == SolveStatus::infeasible ? kExitInfeasible : kExitOk;
}

int cmd_evaluate(const Options& opt) {
  const Instance instance = load_instance(opt.instance_path);
  const Layout layout = load_layout(opt);
  SolutionMeta meta;
  Solution solution;
  try {
    solution = read_solution(opt.solution_path, &meta);
  } catch (const std::exception& e) {
    throw CliError{kExitIo, std::string("solution: ") + e.what()};
  }

  namespace fs = std::filesystem;
  const fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);

  EvaluationReport report;
  std::vector<DistanceHistogramRow> histogram;
  try {
    report = evaluate_solution(instance, layout, solution, opt.params, opt.per_day);
    histogram = distance_histogram(instance, layout, solution,
                                   std::numeric_limits<int>::max());
  } catch (const std::exception& e) {
    throw CliError{kExitUsage, e.what()};
  }

  write_file((dir / "objective.csv").string(), objective_summary_csv(report));
  write_file((dir / "deviation.csv").string(),
             deviation_table_csv(deviation_table(report.station_picks_by_day)));
  write_file((dir / "distance_overall.csv").string(),
             distance_histogram_csv(histogram, false));
  write_file((dir / "distance_by_day.csv").string(),
             distance_histogram_csv(histogram, true));

  std::cout << "objective " << report.objective.combined << ", selected "
            << report.n_selected << ", violations " << report.audit.size()
            << " -> " << dir.string() << "\n";
  for (const Violation& violation : report.audit) {
    std::cout << "violation " << violation.rule << " " << violation.subject
              << ": " << violation.detail << "\n";
  }
  return kExitOk;
}

int cmd_compare(const Options& opt) {
  const Instance instance = load_instance(opt.instance_path);
  check_valid(validate_instance(instance), "instance");
  const Layout layout = load_layout(opt);
  check_valid(validate_layout(layout), "layout");
  const SolveControl control = make_control(opt);

  std::ostringstream csv;
  csv << "mode,status,score_total,efficiency_per_pick,objective,n_selected,"
         "max_rel_dev_pct,max_day_dev_pct,runtime_s,gap\n";

  const std::array<std::string, 3> modes = {"integrated", "sequential", "robust"};
  for (const std::string& mode : modes) {
    try {
      Solution solution;
      if (mode == "sequential") {
        const MilpModel stage1 =
            build_selection_stage(instance, layout, opt.params);
        const Solution selection = run_solver(stage1, control);
        std::set<std::string> selected;
        for (const auto& [sku, shelf] : selection.placements) {
          selected.insert(sku);
        }
        const MilpModel stage2 = build_assignment_stage(
            instance, layout, opt.params, selected, true);
        solution = run_solver(stage2, control);
        solution.runtime_s += selection.runtime_s;
      } else {
        Options mode_opt = opt;
        mode_opt.mode = mode;
        solution = run_solver(build_for_mode(mode_opt, instance, layout), control);
      }
      const EvaluationReport report = evaluate_solution(
          instance, layout, solution, opt.params, mode == "robust");
      double max_day_dev = 0.0;
      for (double dev : report.max_rel_dev_by_day) {
        max_day_dev = std::max(max_day_dev, dev);
      }
      csv << mode << "," << to_string(solution.status) << ","
          << report.objective.part1 << "," << report.objective.part2 << ","
          << report.objective.combined << "," << report.n_selected << ","
          << report.max_rel_dev * 100.0 << "," << max_day_dev * 100.0 << ","
          << solution.runtime_s << "," << solution.gap << "\n";
    } catch (const CliError& e) {
      csv << mode << ",error,,,,,,,,\n";
      std::cerr << mode << ": " << e.message << "\n";
    } catch (const std::exception& e) {
      csv << mode << ",error,,,,,,,,\n";
      std::cerr << mode << ": " << e.what() << "\n";
    }
  }

  std::string out = opt.out == "." ? "compare.csv" : opt.out;
  write_file(out, csv.str());
  std::cout << "wrote comparison -> " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storage assignment toolkit for a pick-and-pass warehouse"};
  app.require_subcommand(1);
  Options opt;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", opt.params.alpha, "Efficiency weight");
    cmd->add_option("--delta", opt.params.delta, "Average balance tolerance");
    cmd->add_option("--delta-day", opt.params.delta_day,
                    "Per-day balance tolerance");
    cmd->add_option("--gap", opt.params.gap_target, "Relative MIP gap target");
    cmd->add_option("--time-limit", opt.params.time_limit_s,
                    "Solve time limit in seconds");
    cmd->add_option("--seed", opt.params.seed, "Random seed");
    cmd->add_option("--workers", opt.workers, "Solver worker count");
  };

  CLI::App* generate = app.add_subcommand("generate", "Generate an instance");
  generate->add_option("--n", opt.n_skus, "Number of SKUs");
  generate->add_option("--stations", opt.stations, "Number of stations");
  generate->add_option("--seed", opt.params.seed, "Random seed");
  generate->add_option("--out", opt.out, "Output directory");

  CLI::App* solve_cmd = app.add_subcommand("solve", "Build and solve a model");
  solve_cmd->add_option("--instance", opt.instance_path, "Instance file")
      ->required();
  solve_cmd->add_option("--layout", opt.layout_path, "Layout file");
  solve_cmd->add_option("--stations", opt.stations,
                        "Stations for the default layout");
  solve_cmd
      ->add_option("--mode", opt.mode, "Model: integrated, robust, sequential")
      ->check(CLI::IsMember({"integrated", "robust", "sequential"}));
  solve_cmd
      ->add_option("--solver", opt.solver,
                   "Solver: exact, heuristic, oracle, export")
      ->check(CLI::IsMember({"exact", "heuristic", "oracle", "export"}));
  solve_cmd->add_option("--out", opt.out, "Solution (or MPS) output path");
  add_params(solve_cmd);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Audit a solution");
  evaluate->add_option("--instance", opt.instance_path, "Instance file")
      ->required();
  evaluate->add_option("--layout", opt.layout_path, "Layout file");
  evaluate->add_option("--stations", opt.stations,
                       "Stations for the default layout");
  evaluate->add_option("--solution", opt.solution_path, "Solution file")
      ->required();
  evaluate->add_flag("--per-day", opt.per_day, "Audit per-day balance");
  evaluate->add_option("--out", opt.out, "Report directory");
  add_params(evaluate);

  CLI::App* compare = app.add_subcommand(
      "compare", "Solve integrated, sequential and robust on one instance");
  compare->add_option("--instance", opt.instance_path, "Instance file")
      ->required();
  compare->add_option("--layout", opt.layout_path, "Layout file");
  compare->add_option("--stations", opt.stations,
                      "Stations for the default layout");
  compare->add_option("--out", opt.out, "Comparison CSV path");
  add_params(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(opt);
    if (solve_cmd->parsed()) return cmd_solve(opt);
    if (evaluate->parsed()) return cmd_evaluate(opt);
    if (compare->parsed()) return cmd_compare(opt);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
