#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pickloop/core.hpp"
#include "pickloop/layout.hpp"

namespace pickloop {

enum class VarKind { binary, integer_, continuous };
enum class Relation { le, eq, ge };

/// Semantic tag attached to every variable so that solvers and audits can
/// interpret a model without the originating instance.
struct VarSemantic {
  enum class Type { x, y, z_avg, z_day } type = Type::x;
  std::string sku_id;    // x
  std::string shelf_id;  // x
  int station = 0;       // x, z_avg, z_day (1-based)
  int rank = 0;          // x, y
  int day = -1;          // z_day (0-based, Monday-first)
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 0.0;
  VarSemantic sem;
};

struct LinearRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Relation rel = Relation::le;
  double rhs = 0.0;
  std::string tag;  // constraint family, e.g. "capacity"
};

/// Solver-agnostic sparse MILP with sense fixed to maximization.
struct MilpModel {
  std::vector<Variable> variables;
  std::vector<double> objective;  // aligned with variables
  std::vector<LinearRow> rows;
};

struct SolveParams {
  double alpha = 250.0;
  double delta = 0.01;
  double delta_day = 0.01;
  double gap_target = 0.005;
  double time_limit_s = 60.0;
  std::uint64_t seed = 0;
};

// Constraint family tags.
namespace tag {
inline constexpr const char* assign_once = "assign_once";
inline constexpr const char* assign_forced = "assign_forced";
inline constexpr const char* precedence_upper = "precedence_upper";
inline constexpr const char* precedence_lower = "precedence_lower";
inline constexpr const char* workload = "workload";
inline constexpr const char* workload_day = "workload_day";
inline constexpr const char* balance_upper = "balance_upper";
inline constexpr const char* balance_lower = "balance_lower";
inline constexpr const char* balance_day_upper = "balance_day_upper";
inline constexpr const char* balance_day_lower = "balance_day_lower";
inline constexpr const char* capacity = "capacity";
}  // namespace tag

/// Integrated three-level model: selection + station + shelf assignment
/// with precedence linking and average workload balance.
MilpModel build_integrated(const Instance& instance, const Layout& layout,
                           const SolveParams& params);

/// Integrated model with the average balance block replaced by per-day
/// workload variables and balance rows.
MilpModel build_robust(const Instance& instance, const Layout& layout,
                       const SolveParams& params);

/// Stage 1 of the sequential baseline: score-maximal selection under
/// capacity and uniqueness only.
MilpModel build_selection_stage(const Instance& instance, const Layout& layout,
                                const SolveParams& params);

/// Stage 2 of the sequential baseline: the integrated model restricted to
/// a given selection. With allow_removal=false every selected SKU must be
/// placed.
MilpModel build_assignment_stage(const Instance& instance, const Layout& layout,
                                 const SolveParams& params,
                                 const std::set<std::string>& selected,
                                 bool allow_removal);

struct ModelStats {
  int n_binary = 0;
  int n_integer = 0;
  int n_continuous = 0;
  std::map<std::string, int> rows_by_tag;
  std::size_t nonzeros = 0;
};

ModelStats model_stats(const MilpModel& model);

}  // namespace pickloop
