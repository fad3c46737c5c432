#pragma once

#include <cstddef>
#include <vector>

#include "vefrac/evolution.hpp"
#include "vefrac/ve_core.hpp"

namespace vefrac {

// Sum over jumps of c(t, left, at) + c(t, at, right).
double jump_variation(const std::vector<JumpRecord>& jumps, const RisInstance& inst);

struct BalanceRow {
  double t = 0.0;
  double energy = 0.0;
  double work = 0.0;
  double work_error = 0.0;
  // E + H1(K\K_0) + Jmp_c - E_0 - W.
  double residual_c = 0.0;
  // E + Var_d + Jmp_e - E_0 - W.
  double residual_e = 0.0;
};

struct BalanceReport {
  std::vector<BalanceRow> rows;
  double max_form_difference = 0.0;
  // Largest residual_c minus (work_error + tolerance); <= 0 means the upper
  // estimate holds at every node.
  double upper_excess = 0.0;
  double tolerance_rel = 1e-8;
  bool forms_agree = true;  // max_form_difference < 1e-12
  bool upper_ok = true;
};

BalanceReport audit_balance(const DiscreteEvolution& evo, const std::vector<JumpRecord>& jumps,
                            const RisInstance& inst, double tolerance_rel = 1e-8);

struct JumpConditionRow {
  std::size_t index = 0;
  double t = 0.0;
  // E(t,A) - E(t,B) - H1(B\A) - c(t,A,B) for (left,at), (at,right), (left,right).
  double left_at = 0.0;
  double at_right = 0.0;
  double left_right = 0.0;
  double cost_left_at = 0.0;
  double cost_at_right = 0.0;
  double cost_left_right = 0.0;
  double tolerance = 0.0;
  bool ok = true;
  std::vector<CrackSet> chain;  // optimal chain from left to right
  std::vector<TransitionSegment> segments;
};

std::vector<JumpConditionRow> audit_jump_conditions(const std::vector<JumpRecord>& jumps, const RisInstance& inst,
                                                    double tolerance_rel = 1e-8);

}  // namespace vefrac
