#include "pickloop/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pickloop {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("JSON parse error: ") + e.what());
  }
}

// Converts missing-key and wrong-type failures into the same error type the
// callers already handle for syntax problems.
template <typename Fn>
auto with_json_errors(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string(what) + ": " + e.what());
  }
}

std::string day_field(int t) { return std::string("picks_") + kDayNames[t]; }

}  // namespace

std::string instance_to_json(const Instance& instance) {
  ordered root;
  root["separator_gap_mm"] = instance.separator_gap_mm;
  root["skus"] = ordered::array();
  for (const Sku& sku : instance.skus) {
    ordered item;
    item["id"] = sku.id;
    item["score"] = sku.score;
    item["height_mm"] = sku.height_mm;
    item["width_mm"] = sku.width_mm;
    item["picks_avg"] = sku.picks_avg;
    item["picks_by_day"] = sku.picks_by_day;
    item["rank"] = sku.rank;
    root["skus"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json root = parse(text);
  return with_json_errors("instance JSON", [&] {
    Instance instance;
    instance.separator_gap_mm = root.at("separator_gap_mm").get<int>();
    for (const json& item : root.at("skus")) {
      Sku sku;
      sku.id = item.at("id").get<std::string>();
      sku.score = item.at("score").get<double>();
      sku.height_mm = item.at("height_mm").get<int>();
      sku.width_mm = item.at("width_mm").get<int>();
      sku.picks_avg = item.at("picks_avg").get<double>();
      const json& days = item.at("picks_by_day");
      if (days.size() != kNumDays) {
        throw std::runtime_error("picks_by_day must have " +
                                 std::to_string(kNumDays) + " entries");
      }
      for (int t = 0; t < kNumDays; ++t) {
        sku.picks_by_day[t] = days[t].get<double>();
      }
      sku.rank = item.at("rank").get<int>();
      instance.skus.push_back(std::move(sku));
    }
    return instance;
  });
}

std::string layout_to_json(const Layout& layout) {
  ordered root;
  root["n_stations"] = layout.n_stations;
  root["shelves"] = ordered::array();
  for (const Shelf& shelf : layout.shelves) {
    ordered item;
    item["id"] = shelf.id;
    item["station"] = shelf.station;
    item["height_mm"] = shelf.height_mm;
    item["width_mm"] = shelf.width_mm;
    item["distance_m"] = shelf.distance_m;
    item["kind"] = shelf.kind == ShelfKind::type1 ? "type1" : "type2";
    root["shelves"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

Layout layout_from_json(const std::string& text) {
  const json root = parse(text);
  return with_json_errors("layout JSON", [&] {
    Layout layout;
    layout.n_stations = root.at("n_stations").get<int>();
    for (const json& item : root.at("shelves")) {
      Shelf shelf;
      shelf.id = item.at("id").get<std::string>();
      shelf.station = item.at("station").get<int>();
      shelf.height_mm = item.at("height_mm").get<int>();
      shelf.width_mm = item.at("width_mm").get<int>();
      shelf.distance_m = item.at("distance_m").get<double>();
      const std::string kind = item.at("kind").get<std::string>();
      if (kind == "type1") {
        shelf.kind = ShelfKind::type1;
      } else if (kind == "type2") {
        shelf.kind = ShelfKind::type2;
      } else {
        throw std::runtime_error("unknown shelf kind: " + kind);
      }
      layout.shelves.push_back(std::move(shelf));
    }
    return layout;
  });
}

std::string solution_to_json(const Solution& solution,
                             const SolutionMeta& meta) {
  ordered root;
  root["mode"] = meta.mode;
  root["solver"] = meta.solver;
  ordered params;
  params["alpha"] = meta.params.alpha;
  params["delta"] = meta.params.delta;
  params["delta_day"] = meta.params.delta_day;
  params["gap_target"] = meta.params.gap_target;
  params["time_limit_s"] = meta.params.time_limit_s;
  params["seed"] = meta.params.seed;
  root["params"] = std::move(params);
  root["status"] = to_string(solution.status);
  root["objective"] = solution.objective;
  root["bound"] = solution.bound;
  root["gap"] = solution.gap;
  root["runtime_s"] = solution.runtime_s;
  root["placements"] = ordered::array();
  for (const auto& [sku, shelf] : solution.placements) {
    ordered item;
    item["sku"] = sku;
    item["shelf"] = shelf;
    root["placements"].push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text, SolutionMeta* meta) {
  const json root = parse(text);
  return with_json_errors("solution JSON", [&] {
    if (meta != nullptr) {
      meta->mode = root.at("mode").get<std::string>();
      meta->solver = root.at("solver").get<std::string>();
      const json& params = root.at("params");
      meta->params.alpha = params.at("alpha").get<double>();
      meta->params.delta = params.at("delta").get<double>();
      meta->params.delta_day = params.at("delta_day").get<double>();
      meta->params.gap_target = params.at("gap_target").get<double>();
      meta->params.time_limit_s = params.at("time_limit_s").get<double>();
      meta->params.seed = params.at("seed").get<std::uint64_t>();
    }
    Solution solution;
    solution.status =
        solve_status_from_string(root.at("status").get<std::string>());
    solution.objective = root.at("objective").get<double>();
    solution.bound = root.at("bound").get<double>();
    solution.gap = root.at("gap").get<double>();
    solution.runtime_s = root.at("runtime_s").get<double>();
    for (const json& item : root.at("placements")) {
      solution.placements.emplace_back(item.at("sku").get<std::string>(),
                                       item.at("shelf").get<std::string>());
    }
    return solution;
  });
}

void write_instance(const Instance& instance, const std::string& path) {
  write_text_file(path, instance_to_json(instance));
}

Instance read_instance(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

void write_layout(const Layout& layout, const std::string& path) {
  write_text_file(path, layout_to_json(layout));
}

Layout read_layout(const std::string& path) {
  return layout_from_json(read_text_file(path));
}

void write_solution(const Solution& solution, const SolutionMeta& meta,
                    const std::string& path) {
  write_text_file(path, solution_to_json(solution, meta));
}

Solution read_solution(const std::string& path, SolutionMeta* meta) {
  return solution_from_json(read_text_file(path), meta);
}

namespace {

std::string format_full(double value) {
  std::ostringstream out;
  out.precision(15);
  out << value;
  return out.str();
}

std::string format_percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", fraction * 100.0);
  return buffer;
}

}  // namespace

std::string deviation_table_csv(const DeviationTable& table) {
  std::ostringstream out;
  out << "station";
  for (int t = 0; t < kNumDays; ++t) out << "," << kDayNames[t] << "_pct";
  out << "\n";
  for (std::size_t k = 0; k < table.dev.size(); ++k) {
    out << (k + 1);
    for (int t = 0; t < kNumDays; ++t) out << "," << format_percent(table.dev[k][t]);
    out << "\n";
  }
  out << "max_positive";
  for (int t = 0; t < kNumDays; ++t) out << "," << format_percent(table.max_positive[t]);
  out << "\nmax_negative";
  for (int t = 0; t < kNumDays; ++t) out << "," << format_percent(table.max_negative[t]);
  out << "\n";
  return out.str();
}

std::string objective_summary_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "score_total," << format_full(report.objective.part1) << "\n";
  out << "efficiency_per_pick," << format_full(report.objective.part2) << "\n";
  out << "objective," << format_full(report.objective.combined) << "\n";
  out << "n_selected," << report.n_selected << "\n";
  out << "max_rel_dev_pct," << format_percent(report.max_rel_dev) << "\n";
  for (int t = 0; t < kNumDays; ++t) {
    out << "max_rel_dev_" << kDayNames[t] << "_pct,"
        << format_percent(report.max_rel_dev_by_day[t]) << "\n";
  }
  out << "violations," << report.audit.size() << "\n";
  return out.str();
}

std::string distance_histogram_csv(
    const std::vector<DistanceHistogramRow>& rows, bool per_day) {
  std::ostringstream out;
  out << "distance_m,picks,sku_count";
  if (per_day) {
    for (int t = 0; t < kNumDays; ++t) out << "," << day_field(t);
  }
  out << "\n";
  for (const DistanceHistogramRow& row : rows) {
    out << format_full(row.distance_m) << "," << format_full(row.picks) << ","
        << row.sku_count;
    if (per_day) {
      for (int t = 0; t < kNumDays; ++t) out << "," << format_full(row.picks_by_day[t]);
    }
    out << "\n";
  }
  return out.str();
}

std::string calibration_report_csv(const CalibrationReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "n_skus," << report.n_skus << "\n";
  out << "log_score_mean," << format_full(report.log_score_mean) << "\n";
  out << "log_score_sd," << format_full(report.log_score_sd) << "\n";
  out << "log_picks_mean," << format_full(report.log_picks_mean) << "\n";
  out << "level_correlation," << format_full(report.level_correlation) << "\n";
  out << "type2_only_frac," << format_full(report.type2_only_frac) << "\n";
  out << "stock_q50_width_mm," << format_full(report.stock_q50_width_mm) << "\n";
  out << "stock_q90_width_mm," << format_full(report.stock_q90_width_mm) << "\n";
  out << "max_width_mm," << format_full(report.max_width_mm) << "\n";
  for (int t = 0; t < kNumDays; ++t) {
    out << "day_share_" << kDayNames[t] << ","
        << format_full(report.day_shares[t]) << "\n";
  }
  out << "total_picks," << format_full(report.total_picks) << "\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace pickloop
