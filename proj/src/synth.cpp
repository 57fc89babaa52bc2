#include "pickloop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pickloop {

namespace {

// Day-share templates. Early week peaks on Tuesday, late week mirrors it
// onto Friday. Exceptional SKUs concentrate >25% of the week on one day.
constexpr std::array<double, kNumDays> kEarlyWeekShares = {
    0.16, 0.24, 0.17, 0.16, 0.14, 0.13};
constexpr std::array<double, kNumDays> kLateWeekShares = {
    0.13, 0.14, 0.16, 0.17, 0.24, 0.16};
constexpr std::array<double, kNumDays> kPeakDayWeights = {
    0.22, 0.18, 0.11, 0.14, 0.21, 0.14};

enum class ProfileKind { baseline, early_week, late_week, exceptional };

std::array<double, kNumDays> apportion(double total,
                                       const std::array<double, kNumDays>& shares) {
  // Largest-remainder rounding; rows sum to the weekly total exactly.
  std::array<double, kNumDays> out{};
  const long long target = std::llround(total);
  long long assigned = 0;
  std::array<double, kNumDays> remainders{};
  for (int t = 0; t < kNumDays; ++t) {
    const double exact = total * shares[t];
    out[t] = std::floor(exact);
    remainders[t] = exact - out[t];
    assigned += static_cast<long long>(out[t]);
  }
  std::array<int, kNumDays> order = {0, 1, 2, 3, 4, 5};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
    return a < b;
  });
  for (int i = 0; assigned < target; ++i) {
    out[order[i % kNumDays]] += 1.0;
    ++assigned;
  }
  return out;
}

std::array<double, kNumDays> normalized(std::array<double, kNumDays> w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

std::vector<Violation> validate_config(const GeneratorConfig& config) {
  std::vector<Violation> violations;
  auto add = [&](const std::string& rule, const std::string& detail) {
    violations.push_back({rule, "config", detail});
  };
  if (config.n_skus <= 0) add("n_skus_positive", "n_skus must be positive");
  if (config.log_score_sd <= 0.0) add("sd_positive", "log_score_sd must be positive");
  if (config.log_picks_sd <= 0.0) add("sd_positive", "log_picks_sd must be positive");
  if (config.log_corr < -1.0 || config.log_corr > 1.0) {
    add("corr_range", "log_corr must lie in [-1, 1]");
  }
  auto frac_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!frac_ok(config.type2_only_frac)) {
    add("fraction_range", "type2_only_frac must lie in [0, 1]");
  }
  if (!frac_ok(config.rank1_share) || !frac_ok(config.rank3_share) ||
      config.rank1_share + config.rank3_share > 1.0) {
    add("fraction_range", "rank shares must lie in [0, 1] and sum to at most 1");
  }
  const DayProfileMix& mix = config.day_profile_mix;
  if (!frac_ok(mix.baseline) || !frac_ok(mix.early_week) ||
      !frac_ok(mix.late_week) || !frac_ok(mix.exceptional)) {
    add("fraction_range", "profile mix weights must lie in [0, 1]");
  }
  const double mix_sum =
      mix.baseline + mix.early_week + mix.late_week + mix.exceptional;
  if (std::abs(mix_sum - 1.0) > 1e-9) {
    add("mix_sum", "profile mix weights must sum to 1");
  }
  if (config.unit_width_min_mm <= 0 ||
      config.unit_width_max_mm < config.unit_width_min_mm) {
    add("width_range", "unit width range must be positive and ordered");
  }
  if (config.stacking_depth < 1) add("stacking_depth", "stacking depth must be >= 1");
  if (config.separator_gap_mm < 0) add("gap_negative", "separator gap must be >= 0");
  if (config.profile_noise < 0.0) add("noise_negative", "profile noise must be >= 0");
  if (config.score_cap <= 0.0) add("score_cap", "score cap must be positive");
  return violations;
}

std::vector<std::array<double, kNumDays>> generate_day_profiles(
    const GeneratorConfig& config, const std::vector<double>& weekly_picks,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);

  // High runners keep near-uniform day shares: force the top decile by
  // weekly picks onto the baseline profile.
  double decile_cut = 0.0;
  if (!weekly_picks.empty()) {
    std::vector<double> sorted = weekly_picks;
    std::sort(sorted.begin(), sorted.end());
    decile_cut = sorted[static_cast<std::size_t>(
        std::floor(0.9 * static_cast<double>(sorted.size() - 1)))];
  }

  const DayProfileMix& mix = config.day_profile_mix;
  std::vector<std::array<double, kNumDays>> profiles;
  profiles.reserve(weekly_picks.size());
  for (double weekly : weekly_picks) {
    ProfileKind kind = ProfileKind::baseline;
    if (weekly <= decile_cut) {
      const double u = unit(rng);
      if (u < mix.exceptional) {
        kind = ProfileKind::exceptional;
      } else if (u < mix.exceptional + mix.early_week) {
        kind = ProfileKind::early_week;
      } else if (u < mix.exceptional + mix.early_week + mix.late_week) {
        kind = ProfileKind::late_week;
      }
    } else {
      unit(rng);  // keep the stream aligned across deciles
    }

    std::array<double, kNumDays> shares{};
    switch (kind) {
      case ProfileKind::baseline:
        for (double& s : shares) s = 1.0 / kNumDays;
        break;
      case ProfileKind::early_week:
        shares = kEarlyWeekShares;
        break;
      case ProfileKind::late_week:
        shares = kLateWeekShares;
        break;
      case ProfileKind::exceptional: {
        std::discrete_distribution<int> peak_day(kPeakDayWeights.begin(),
                                                 kPeakDayWeights.end());
        const int peak = peak_day(rng);
        std::uniform_real_distribution<double> peak_share(0.26, 0.38);
        const double p = peak_share(rng);
        for (int t = 0; t < kNumDays; ++t) {
          shares[t] = t == peak ? p : (1.0 - p) / (kNumDays - 1);
        }
        break;
      }
    }
    for (double& s : shares) s *= 1.0 + config.profile_noise * noise(rng);
    profiles.push_back(apportion(weekly, normalized(shares)));
  }
  return profiles;
}

Instance generate_instance(const GeneratorConfig& config) {
  const std::vector<Violation> problems = validate_config(config);
  if (!problems.empty()) {
    throw std::invalid_argument("invalid generator config: " +
                                problems.front().detail);
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> unit_width(config.unit_width_min_mm,
                                                config.unit_width_max_mm);
  std::uniform_int_distribution<int> type1_height(60, 250);
  std::uniform_int_distribution<int> type2_height(251, 450);
  std::uniform_int_distribution<int> mid_stock(20, 48);

  Instance instance;
  instance.separator_gap_mm = config.separator_gap_mm;
  instance.skus.reserve(config.n_skus);

  std::vector<double> weekly_picks(config.n_skus, 0.0);
  const double rho = config.log_corr;
  const double rho_rest = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  for (int i = 0; i < config.n_skus; ++i) {
    Sku sku;
    char id[16];
    std::snprintf(id, sizeof(id), "sku%06d", i + 1);
    sku.id = id;

    const double z1 = gauss(rng);
    const double z2 = gauss(rng);
    const double log_score = config.log_score_mean + config.log_score_sd * z1;
    const double log_picks =
        config.log_picks_mean + config.log_picks_sd * (rho * z1 + rho_rest * z2);
    sku.score = std::min(std::exp(log_score), config.score_cap);
    weekly_picks[i] =
        static_cast<double>(std::max<long long>(1, std::llround(std::exp(log_picks))));

    sku.height_mm =
        unit(rng) < config.type2_only_frac ? type2_height(rng) : type1_height(rng);

    // Target stock: 90% small runners averaging ~9 units, a mid band,
    // and a 1% long tail of bulky stock reaching 252 units.
    const double u_stock = unit(rng);
    int stock = 0;
    if (u_stock < 0.90) {
      stock = static_cast<int>(std::lround(
          0.6 + 17.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng)));
      stock = std::clamp(stock, 1, 19);
    } else if (u_stock < 0.99) {
      stock = mid_stock(rng);
    } else {
      const double u = unit(rng);
      stock = static_cast<int>(std::lround(49.0 + 203.0 * u * u * u));
    }
    const int columns = (stock + config.stacking_depth - 1) / config.stacking_depth;
    sku.width_mm = unit_width(rng) * columns;

    const double u_rank = unit(rng);
    sku.rank = u_rank < config.rank1_share
                   ? 1
                   : (u_rank < 1.0 - config.rank3_share ? 2 : 3);

    instance.skus.push_back(std::move(sku));
  }

  const std::vector<std::array<double, kNumDays>> profiles =
      generate_day_profiles(config, weekly_picks, config.seed + 1);
  for (int i = 0; i < config.n_skus; ++i) {
    Sku& sku = instance.skus[i];
    sku.picks_by_day = profiles[i];
    double sum = 0.0;
    for (double p : sku.picks_by_day) sum += p;
    sku.picks_avg = sum / kNumDays;
  }

  const std::vector<Violation> audit = validate_instance(instance);
  if (!audit.empty()) {
    throw std::logic_error("generated instance failed validation: " +
                           audit.front().rule);
  }
  return instance;
}

CalibrationReport calibration_report(const Instance& instance) {
  if (instance.skus.empty()) {
    throw std::invalid_argument("calibration report needs a nonempty instance");
  }
  CalibrationReport report;
  report.n_skus = static_cast<int>(instance.skus.size());

  const double n = static_cast<double>(instance.skus.size());
  double ls_mean = 0.0, lp_mean = 0.0;
  for (const Sku& sku : instance.skus) {
    ls_mean += std::log(sku.score);
    lp_mean += std::log(std::max(sku.picks_avg * kNumDays, 1.0));
  }
  ls_mean /= n;
  lp_mean /= n;
  double ls_var = 0.0;
  for (const Sku& sku : instance.skus) {
    const double d = std::log(sku.score) - ls_mean;
    ls_var += d * d;
  }
  report.log_score_mean = ls_mean;
  report.log_score_sd = std::sqrt(ls_var / n);
  report.log_picks_mean = lp_mean;

  double s_mean = 0.0, p_mean = 0.0;
  for (const Sku& sku : instance.skus) {
    s_mean += sku.score;
    p_mean += sku.picks_avg;
  }
  s_mean /= n;
  p_mean /= n;
  double cov = 0.0, s_var = 0.0, p_var = 0.0;
  for (const Sku& sku : instance.skus) {
    const double ds = sku.score - s_mean;
    const double dp = sku.picks_avg - p_mean;
    cov += ds * dp;
    s_var += ds * ds;
    p_var += dp * dp;
  }
  report.level_correlation =
      s_var > 0.0 && p_var > 0.0 ? cov / std::sqrt(s_var * p_var) : 0.0;

  int type2 = 0;
  std::vector<double> widths;
  widths.reserve(instance.skus.size());
  for (const Sku& sku : instance.skus) {
    if (sku.height_mm > 250) ++type2;
    widths.push_back(sku.width_mm);
  }
  report.type2_only_frac = type2 / n;
  std::sort(widths.begin(), widths.end());
  auto quantile = [&](double q) {
    return widths[static_cast<std::size_t>(
        std::floor(q * static_cast<double>(widths.size() - 1)))];
  };
  report.stock_q50_width_mm = quantile(0.50);
  report.stock_q90_width_mm = quantile(0.90);
  report.max_width_mm = widths.back();

  std::array<double, kNumDays> day_totals{};
  double total = 0.0;
  for (const Sku& sku : instance.skus) {
    for (int t = 0; t < kNumDays; ++t) {
      day_totals[t] += sku.picks_by_day[t];
      total += sku.picks_by_day[t];
    }
  }
  report.total_picks = total;
  for (int t = 0; t < kNumDays; ++t) {
    report.day_shares[t] = total > 0.0 ? day_totals[t] / total : 0.0;
  }
  return report;
}

}  // namespace pickloop
