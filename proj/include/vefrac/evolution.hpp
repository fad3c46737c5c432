#pragma once

#include <cstddef>
#include <vector>

#include "vefrac/ve_core.hpp"

namespace vefrac {

class TimePartition {
 public:
  TimePartition() = default;
  static TimePartition uniform(double horizon, std::size_t steps);
  // Must start at 0 and increase strictly.
  static TimePartition from_times(std::vector<double> times);
  // Uniform partition with each step containing one of `points` split
  // geometrically `levels` times towards that point.
  static TimePartition refined_near(double horizon, std::size_t steps, const std::vector<double>& points,
                                    std::size_t levels);

  const std::vector<double>& times() const { return times_; }
  std::size_t steps() const { return times_.empty() ? 0 : times_.size() - 1; }
  double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
  double tau() const;  // largest increment

 private:
  std::vector<double> times_;
};

// One node of the discrete evolution. The hop fields describe K_{i-1} -> K_i
// and are zero at i = 0.
struct StepRecord {
  double t = 0.0;
  CrackSet state;
  double energy = 0.0;  // E(t_i, K_i)
  double power = 0.0;   // right time derivative of E at (t_i, K_i)
  double d = 0.0;
  double delta = 0.0;  // integral part of delta
  double alpha = 0.0;
  double r = 0.0;  // residual stability of K_i at t_i
  // Lagged trapezoid of the power up to t_i and the accumulated
  // |trapezoid - Simpson| estimate of its error.
  double work = 0.0;
  double work_error = 0.0;
  std::size_t competitors = 0;
};

struct DiscreteEvolution {
  TimePartition partition;
  bool viscous = true;
  std::vector<StepRecord> steps;

  const CrackSet& state(std::size_t i) const { return steps.at(i).state; }
  // K_0 at t = 0 and K_i on (t_{i-1}, t_i].
  const CrackSet& interpolant(double t) const;
};

struct RunOptions {
  // Evaluate R of every chosen state (one more search per step).
  bool stability_audit = true;
};

DiscreteEvolution run_scheme(const RisInstance& inst, const TimePartition& partition, const CrackSet& k0,
                             const RunOptions& opts = {});
// The same driver with delta switched off.
DiscreteEvolution energetic_mode(RisInstance inst, const TimePartition& partition, const CrackSet& k0,
                                 const RunOptions& opts = {});

// A jump at step i: left = K_{i-1}, at = right = K_i, all at time t_i.
struct JumpRecord {
  std::size_t index = 0;
  double t = 0.0;
  CrackSet left;
  CrackSet at;
  CrackSet right;
  double magnitude = 0.0;  // d of the hop
  double alpha = 0.0;
};

// Flags steps whose d exceeds `threshold` times the median d of the steps
// that changed the state, and every step that nucleates (alpha > 0).
std::vector<JumpRecord> detect_jumps(const DiscreteEvolution& evo, double threshold = 10.0);

struct ComponentReport {
  double bound = 0.0;
  std::size_t initial = 0;
  std::size_t max_components = 0;
  std::vector<std::size_t> counts;
  std::size_t violations = 0;
  double slack() const { return bound - static_cast<double>(max_components); }
};

// #components(K_i) <= h + exp(C_P T) (E(0,K_0) + 1) / w, w the nucleation
// weight of the instance.
ComponentReport component_bound_check(const DiscreteEvolution& evo, const RisInstance& inst, double c_p);

struct GronwallReport {
  double max_excess = 0.0;  // max of E_i - ((E_0 + 1) exp(C_P t_i) - 1)
  std::size_t violations = 0;
};

GronwallReport gronwall_check(const DiscreteEvolution& evo, double c_p);

// Largest |dE/dt| - C_P (E + 1) over the recorded steps.
double power_bound_excess(const DiscreteEvolution& evo, double c_p);

struct RefineReport {
  std::vector<std::size_t> steps;    // per run
  std::vector<double> sample_times;
  // distance[k][s]: Hausdorff distance between runs k and k+1 at sample s.
  std::vector<std::vector<double>> distance;
  double resolution = 0.0;
  std::vector<DiscreteEvolution> runs;
};

// Uniform partitions with the given step counts (increasing).
RefineReport refine_study(const RisInstance& inst, const CrackSet& k0, double horizon,
                          const std::vector<std::size_t>& step_counts, const std::vector<double>& sample_times);

}  // namespace vefrac
