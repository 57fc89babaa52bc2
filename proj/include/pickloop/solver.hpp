#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pickloop/model.hpp"

namespace pickloop {

enum class SolveMode { exact, heuristic, oracle };

struct SolveControl {
  SolveMode mode = SolveMode::exact;
  double gap_target = 0.005;
  double time_limit_s = 60.0;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Depth-first branch-and-bound over x variables with a fractional
/// knapsack bound. Deterministic for a fixed seed and workers=1.
Solution solve_exact(const MilpModel& model, const SolveControl& control);

/// Greedy construction plus feasibility-preserving local search (relocate,
/// swap, eject-and-reinsert). Bound comes from the root relaxation.
Solution solve_heuristic(const MilpModel& model, const SolveControl& control);

/// Exhaustive enumeration of all shelf assignments. Guarded by
/// max_candidates; throws when the model is too large for the oracle.
Solution brute_force_oracle(const MilpModel& model,
                            double max_candidates = 1e7);

Solution solve(const MilpModel& model, const SolveControl& control);

/// Fixed-format MPS export. The objective is negated so that standard
/// minimizing MPS consumers reproduce the maximization optimum; a header
/// comment records this. Returns the number of bytes written.
std::size_t export_mps(const MilpModel& model, std::ostream& out,
                       const std::string& name = "PICKLOOP");
std::size_t export_mps_file(const MilpModel& model, const std::string& path,
                            const std::string& name = "PICKLOOP");

}  // namespace pickloop
