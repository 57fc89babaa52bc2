#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pickloop/core.hpp"

namespace pickloop {

/// Mixture weights for the day-of-week demand profiles.
struct DayProfileMix {
  double baseline = 0.58;     // near-uniform shares
  double early_week = 0.18;   // Tuesday peak
  double late_week = 0.18;    // Friday peak
  double exceptional = 0.06;  // >25% of weekly picks on one day
};

struct GeneratorConfig {
  int n_skus = 4693;
  std::uint64_t seed = 42;
  double log_score_mean = -7.81;
  double log_score_sd = 2.34;
  double log_picks_mean = 6.84;
  double log_picks_sd = 1.5;
  // Log-scale correlation calibrated so the level-scale Pearson
  // correlation between score and picks lands near 0.718.
  double log_corr = 0.91;
  double score_picks_corr = 0.718;  // target, reported only
  double type2_only_frac = 0.174;
  DayProfileMix day_profile_mix;
  double rank1_share = 0.10;
  double rank3_share = 0.10;
  int unit_width_min_mm = 40;
  int unit_width_max_mm = 120;
  int stacking_depth = 3;  // stock units per width column
  int separator_gap_mm = 10;
  double profile_noise = 0.10;
  double score_cap = 1.0;
};

std::vector<Violation> validate_config(const GeneratorConfig& config);

Instance generate_instance(const GeneratorConfig& config);

/// Apportions integer weekly picks over the six days per the configured
/// mixture. Rows sum to the weekly total exactly (largest-remainder
/// rounding). profile_kinds/peak_days are outputs for reporting.
std::vector<std::array<double, kNumDays>> generate_day_profiles(
    const GeneratorConfig& config, const std::vector<double>& weekly_picks,
    std::uint64_t seed);

struct CalibrationReport {
  int n_skus = 0;
  double log_score_mean = 0.0;
  double log_score_sd = 0.0;
  double log_picks_mean = 0.0;
  double level_correlation = 0.0;  // Pearson corr of (score, picks_avg)
  double type2_only_frac = 0.0;
  double stock_q50_width_mm = 0.0;
  double stock_q90_width_mm = 0.0;
  double max_width_mm = 0.0;
  std::array<double, kNumDays> day_shares{};
  double total_picks = 0.0;
};

CalibrationReport calibration_report(const Instance& instance);

}  // namespace pickloop
