#include "pickloop/model.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace pickloop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BuildOptions {
  bool selection_only = false;   // stage 1: no precedence, no balance
  bool per_day_balance = false;  // robust variant
  bool forced_assignment = false;
  const std::set<std::string>* restrict_to = nullptr;
};

std::string x_name(const std::string& sku, const std::string& shelf) {
  return "x(" + sku + "," + shelf + ")";
}

MilpModel build_common(const Instance& instance, const Layout& layout,
                       const SolveParams& params, const BuildOptions& opt) {
  {
    auto violations = validate_instance(instance);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid instance: " + violations.front().rule +
                                  " (" + violations.front().subject + ")");
    }
  }
  if (opt.restrict_to) {
    for (const auto& id : *opt.restrict_to) {
      if (std::none_of(instance.skus.begin(), instance.skus.end(),
                       [&](const Sku& s) { return s.id == id; })) {
        throw std::invalid_argument("selected sku not in instance: " + id);
      }
    }
  }

  std::vector<const Sku*> skus;
  for (const Sku& sku : instance.skus) {
    if (opt.restrict_to && !opt.restrict_to->count(sku.id)) continue;
    skus.push_back(&sku);
  }

  double picks_sum = 0.0;
  for (const Sku& sku : instance.skus) picks_sum += sku.picks_avg;
  if (!instance.skus.empty() && picks_sum <= 0.0 && !opt.selection_only) {
    throw std::domain_error("zero total picks: efficiency objective undefined");
  }
  const double part2_scale = picks_sum > 0.0 ? 1.0 / picks_sum : 0.0;

  // The capacity-based station pruning is only sound when every counted
  // SKU must be placed, i.e. in the forced assignment stage.
  RankWidthTable width_below{};
  if (opt.forced_assignment) {
    Instance selected_only;
    selected_only.separator_gap_mm = instance.separator_gap_mm;
    for (const Sku* sku : skus) selected_only.skus.push_back(*sku);
    width_below = rank_prefix_widths(selected_only);
  }

  MilpModel model;
  const int n_stations = layout.n_stations;
  const double gap = instance.separator_gap_mm;

  struct XRef {
    int var = 0;
    const Sku* sku = nullptr;
    const Shelf* shelf = nullptr;
  };
  std::vector<XRef> x_refs;
  std::map<std::string, std::vector<int>> x_by_sku;  // sku id -> x indices
  std::map<int, std::vector<int>> x_by_shelf;        // shelf index -> x indices

  for (const Sku* sku : skus) {
    const auto shelf_ids =
        eligible_shelves(*sku, layout, width_below, instance.separator_gap_mm);
    for (int shelf_index : shelf_ids) {
      const Shelf& shelf = layout.shelves[shelf_index];
      VarSemantic sem;
      sem.type = VarSemantic::Type::x;
      sem.sku_id = sku->id;
      sem.shelf_id = shelf.id;
      sem.station = shelf.station;
      sem.rank = sku->rank;
      const int var = static_cast<int>(model.variables.size());
      model.variables.push_back(
          {x_name(sku->id, shelf.id), VarKind::binary, 0.0, 1.0, sem});
      double coeff = sku->score;
      if (!opt.selection_only) {
        coeff += params.alpha * part2_scale * sku->picks_avg / shelf.distance_m;
      }
      model.objective.push_back(coeff);
      x_refs.push_back({var, sku, &shelf});
      x_by_sku[sku->id].push_back(var);
      x_by_shelf[shelf_index].push_back(var);
    }
  }

  // y_o for every rank with an x variable, plus referenced predecessors.
  std::map<int, int> y_var;  // rank -> variable index
  if (!opt.selection_only) {
    std::set<int> y_ranks;
    for (const XRef& ref : x_refs) {
      y_ranks.insert(ref.sku->rank);
      if (ref.sku->rank > kMinRank) y_ranks.insert(ref.sku->rank - 1);
    }
    for (int rank : y_ranks) {
      VarSemantic sem;
      sem.type = VarSemantic::Type::y;
      sem.rank = rank;
      y_var[rank] = static_cast<int>(model.variables.size());
      model.variables.push_back({"y(" + std::to_string(rank) + ")",
                                 VarKind::integer_, 1.0,
                                 static_cast<double>(n_stations), sem});
      model.objective.push_back(0.0);
    }
  }

  // Workload variables: z(k) for the average model, z(k,t) per day.
  std::vector<int> z_avg(n_stations + 1, -1);
  std::vector<std::array<int, kNumDays>> z_day(n_stations + 1);
  if (!opt.selection_only) {
    if (!opt.per_day_balance) {
      for (int k = 1; k <= n_stations; ++k) {
        VarSemantic sem;
        sem.type = VarSemantic::Type::z_avg;
        sem.station = k;
        z_avg[k] = static_cast<int>(model.variables.size());
        model.variables.push_back(
            {"z(" + std::to_string(k) + ")", VarKind::continuous, 0.0, kInf, sem});
        model.objective.push_back(0.0);
      }
    } else {
      for (int k = 1; k <= n_stations; ++k) {
        for (int t = 0; t < kNumDays; ++t) {
          VarSemantic sem;
          sem.type = VarSemantic::Type::z_day;
          sem.station = k;
          sem.day = t;
          z_day[k][t] = static_cast<int>(model.variables.size());
          model.variables.push_back({"z(" + std::to_string(k) + "," +
                                         kDayNames[t] + ")",
                                     VarKind::continuous, 0.0, kInf, sem});
          model.objective.push_back(0.0);
        }
      }
    }
  }

  // (1) each SKU on at most (exactly, when forced) one shelf.
  for (const Sku* sku : skus) {
    auto it = x_by_sku.find(sku->id);
    const bool has_vars = it != x_by_sku.end();
    if (!has_vars && !opt.forced_assignment) continue;
    LinearRow row;
    if (has_vars) {
      for (int var : it->second) row.coeffs.push_back({var, 1.0});
    }
    if (opt.forced_assignment) {
      row.rel = Relation::eq;
      row.rhs = 1.0;
      row.tag = tag::assign_forced;
    } else {
      row.rel = Relation::le;
      row.rhs = 1.0;
      row.tag = tag::assign_once;
    }
    model.rows.push_back(std::move(row));
  }

  // (2)-(3) precedence linking through the last-station variables y_o.
  if (!opt.selection_only) {
    for (const XRef& ref : x_refs) {
      const int o = ref.sku->rank;
      const int k_r = ref.shelf->station;
      {
        LinearRow row;
        row.coeffs.push_back({ref.var, static_cast<double>(k_r)});
        row.coeffs.push_back({y_var.at(o), -1.0});
        row.rel = Relation::le;
        row.rhs = 0.0;
        row.tag = tag::precedence_upper;
        model.rows.push_back(std::move(row));
      }
      if (o > kMinRank) {
        // k_r * x + |K| * (1 - x) >= y_{o-1}: valid also when x = 0.
        LinearRow row;
        row.coeffs.push_back({ref.var, static_cast<double>(k_r - n_stations)});
        row.coeffs.push_back({y_var.at(o - 1), -1.0});
        row.rel = Relation::ge;
        row.rhs = static_cast<double>(-n_stations);
        row.tag = tag::precedence_lower;
        model.rows.push_back(std::move(row));
      }
    }
  }

  // (4)-(6) workload definition and balance, average or per day. The
  // average workload is substituted symbolically into the balance rows.
  auto add_balance_rows = [&](const std::vector<int>& z_vars, double delta,
                              const char* up_tag, const char* lo_tag) {
    const double inv_k = 1.0 / n_stations;
    for (std::size_t i = 0; i < z_vars.size(); ++i) {
      LinearRow up, lo;
      for (std::size_t j = 0; j < z_vars.size(); ++j) {
        const double self = i == j ? 1.0 : 0.0;
        up.coeffs.push_back({z_vars[j], self - (1.0 + delta) * inv_k});
        lo.coeffs.push_back({z_vars[j], self - (1.0 - delta) * inv_k});
      }
      up.rel = Relation::le;
      up.rhs = 0.0;
      up.tag = up_tag;
      lo.rel = Relation::ge;
      lo.rhs = 0.0;
      lo.tag = lo_tag;
      model.rows.push_back(std::move(up));
      model.rows.push_back(std::move(lo));
    }
  };

  if (!opt.selection_only && !opt.per_day_balance) {
    std::vector<int> z_vars;
    for (int k = 1; k <= n_stations; ++k) {
      LinearRow row;
      row.coeffs.push_back({z_avg[k], 1.0});
      for (const XRef& ref : x_refs) {
        if (ref.shelf->station == k) {
          row.coeffs.push_back({ref.var, -ref.sku->picks_avg});
        }
      }
      row.rel = Relation::eq;
      row.rhs = 0.0;
      row.tag = tag::workload;
      model.rows.push_back(std::move(row));
      z_vars.push_back(z_avg[k]);
    }
    add_balance_rows(z_vars, params.delta, tag::balance_upper,
                     tag::balance_lower);
  } else if (!opt.selection_only) {
    for (int t = 0; t < kNumDays; ++t) {
      std::vector<int> z_vars;
      for (int k = 1; k <= n_stations; ++k) {
        LinearRow row;
        row.coeffs.push_back({z_day[k][t], 1.0});
        for (const XRef& ref : x_refs) {
          if (ref.shelf->station == k) {
            row.coeffs.push_back({ref.var, -ref.sku->picks_by_day[t]});
          }
        }
        row.rel = Relation::eq;
        row.rhs = 0.0;
        row.tag = tag::workload_day;
        model.rows.push_back(std::move(row));
        z_vars.push_back(z_day[k][t]);
      }
      add_balance_rows(z_vars, params.delta_day, tag::balance_day_upper,
                       tag::balance_day_lower);
    }
  }

  // (7) shelf capacity with separator gaps: n SKUs need n-1 separators.
  for (const auto& [shelf_index, vars] : x_by_shelf) {
    const Shelf& shelf = layout.shelves[shelf_index];
    LinearRow row;
    for (int var : vars) {
      const Sku* sku = x_refs[var].sku;  // x variables precede all others
      row.coeffs.push_back({var, static_cast<double>(sku->width_mm) + gap});
    }
    row.rel = Relation::le;
    row.rhs = static_cast<double>(shelf.width_mm) + gap;
    row.tag = tag::capacity;
    model.rows.push_back(std::move(row));
  }

  return model;
}

}  // namespace

MilpModel build_integrated(const Instance& instance, const Layout& layout,
                           const SolveParams& params) {
  return build_common(instance, layout, params, {});
}

MilpModel build_robust(const Instance& instance, const Layout& layout,
                       const SolveParams& params) {
  BuildOptions opt;
  opt.per_day_balance = true;
  return build_common(instance, layout, params, opt);
}

MilpModel build_selection_stage(const Instance& instance, const Layout& layout,
                                const SolveParams& params) {
  BuildOptions opt;
  opt.selection_only = true;
  return build_common(instance, layout, params, opt);
}

MilpModel build_assignment_stage(const Instance& instance, const Layout& layout,
                                 const SolveParams& params,
                                 const std::set<std::string>& selected,
                                 bool allow_removal) {
  BuildOptions opt;
  opt.restrict_to = &selected;
  opt.forced_assignment = !allow_removal;
  return build_common(instance, layout, params, opt);
}

ModelStats model_stats(const MilpModel& model) {
  ModelStats stats;
  for (const Variable& var : model.variables) {
    switch (var.kind) {
      case VarKind::binary: ++stats.n_binary; break;
      case VarKind::integer_: ++stats.n_integer; break;
      case VarKind::continuous: ++stats.n_continuous; break;
    }
  }
  for (const LinearRow& row : model.rows) {
    ++stats.rows_by_tag[row.tag];
    stats.nonzeros += row.coeffs.size();
  }
  return stats;
}

}  // namespace pickloop
