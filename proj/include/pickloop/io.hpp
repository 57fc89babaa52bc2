#pragma once

#include <string>

#include "pickloop/core.hpp"
#include "pickloop/evaluate.hpp"
#include "pickloop/layout.hpp"
#include "pickloop/synth.hpp"

namespace pickloop {

// Human-diffable JSON object formats. Numeric fields carry unit suffixes
// in their names; per-day arrays are Monday-first.

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void write_instance(const Instance& instance, const std::string& path);
Instance read_instance(const std::string& path);

std::string layout_to_json(const Layout& layout);
Layout layout_from_json(const std::string& text);
void write_layout(const Layout& layout, const std::string& path);
Layout read_layout(const std::string& path);

struct SolutionMeta {
  std::string mode;    // integrated | robust | sequential
  std::string solver;  // exact | heuristic | oracle
  SolveParams params;
};

std::string solution_to_json(const Solution& solution,
                             const SolutionMeta& meta);
Solution solution_from_json(const std::string& text, SolutionMeta* meta);
void write_solution(const Solution& solution, const SolutionMeta& meta,
                    const std::string& path);
Solution read_solution(const std::string& path, SolutionMeta* meta);

// CSV report emitters. Deviations are written in percent with two
// decimals; everything else in full precision.
std::string deviation_table_csv(const DeviationTable& table);
std::string objective_summary_csv(const EvaluationReport& report);
std::string distance_histogram_csv(
    const std::vector<DistanceHistogramRow>& rows, bool per_day);
std::string calibration_report_csv(const CalibrationReport& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pickloop
