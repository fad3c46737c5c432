#include "vefrac/audits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vefrac {

namespace {

double cost_of(double t, const CrackSet& a, const CrackSet& b, const RisInstance& inst) {
  return jump_cost(t, a, b, inst).cost.value();
}

double incremental_of(double t, const CrackSet& a, const CrackSet& b, const RisInstance& inst) {
  return a == b ? 0.0 : incremental_jump_cost(t, a, b, inst);
}

}  // namespace

double jump_variation(const std::vector<JumpRecord>& jumps, const RisInstance& inst) {
  double total = 0.0;
  for (const auto& j : jumps) total += cost_of(j.t, j.left, j.at, inst) + cost_of(j.t, j.at, j.right, inst);
  return total;
}

BalanceReport audit_balance(const DiscreteEvolution& evo, const std::vector<JumpRecord>& jumps,
                            const RisInstance& inst, double tolerance_rel) {
  BalanceReport rep;
  rep.tolerance_rel = tolerance_rel;
  if (evo.steps.empty()) return rep;
  std::vector<double> jump_c(evo.steps.size(), 0.0), jump_e(evo.steps.size(), 0.0);
  for (const auto& j : jumps) {
    jump_c[j.index] += cost_of(j.t, j.left, j.at, inst) + cost_of(j.t, j.at, j.right, inst);
    jump_e[j.index] += incremental_of(j.t, j.left, j.at, inst) + incremental_of(j.t, j.at, j.right, inst);
  }
  const auto& k0 = evo.steps.front().state;
  const double e0 = evo.steps.front().energy;
  double jc = 0.0, je = 0.0, var_d = 0.0;
  rep.upper_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < evo.steps.size(); ++i) {
    const auto& s = evo.steps[i];
    jc += jump_c[i];
    je += jump_e[i];
    var_d += s.d;
    BalanceRow row;
    row.t = s.t;
    row.energy = s.energy;
    row.work = s.work;
    row.work_error = s.work_error;
    row.residual_c = s.energy + h1_diff(k0, s.state) + jc - e0 - s.work;
    row.residual_e = s.energy + var_d + je - e0 - s.work;
    rep.max_form_difference = std::max(rep.max_form_difference, std::abs(row.residual_c - row.residual_e));
    const double allowance = s.work_error + tolerance_rel * (1.0 + e0 + std::abs(s.work));
    rep.upper_excess = std::max(rep.upper_excess, row.residual_c - allowance);
    rep.rows.push_back(row);
  }
  rep.forms_agree = rep.max_form_difference < 1e-12;
  rep.upper_ok = rep.upper_excess <= 0.0;
  return rep;
}

std::vector<JumpConditionRow> audit_jump_conditions(const std::vector<JumpRecord>& jumps, const RisInstance& inst,
                                                    double tolerance_rel) {
  std::vector<JumpConditionRow> out;
  for (const auto& j : jumps) {
    JumpConditionRow row;
    row.index = j.index;
    row.t = j.t;
    const double el = inst.energy(j.t, j.left), ea = inst.energy(j.t, j.at), er = inst.energy(j.t, j.right);
    row.cost_left_at = cost_of(j.t, j.left, j.at, inst);
    row.cost_at_right = cost_of(j.t, j.at, j.right, inst);
    auto whole = jump_cost(j.t, j.left, j.right, inst);
    row.cost_left_right = whole.cost.value();
    row.chain = whole.chain;
    row.segments = whole.segments;
    row.left_at = el - ea - h1_diff(j.left, j.at) - row.cost_left_at;
    row.at_right = ea - er - h1_diff(j.at, j.right) - row.cost_at_right;
    row.left_right = el - er - h1_diff(j.left, j.right) - row.cost_left_right;
    row.tolerance = tolerance_rel * (1.0 + el);
    row.ok = std::abs(row.left_at) <= row.tolerance && std::abs(row.at_right) <= row.tolerance &&
             std::abs(row.left_right) <= row.tolerance;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace vefrac
