#include "vefrac/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vefrac/error.hpp"

namespace vefrac {

TimePartition TimePartition::uniform(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon must be positive");
  if (steps == 0) throw ValidationError("partition needs at least one step");
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  t.back() = horizon;
  return from_times(std::move(t));
}

TimePartition TimePartition::from_times(std::vector<double> times) {
  if (times.size() < 2) throw ValidationError("partition needs at least one step");
  if (times.front() != 0.0) throw ValidationError("partition must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i]))
      throw ValidationError("partition times must increase strictly");
  TimePartition p;
  p.times_ = std::move(times);
  return p;
}

TimePartition TimePartition::refined_near(double horizon, std::size_t steps, const std::vector<double>& points,
                                          std::size_t levels) {
  auto base = uniform(horizon, steps);
  std::vector<double> t = base.times_;
  const double tau = base.tau();
  for (double p : points) {
    for (std::size_t j = 1; j <= levels; ++j) {
      const double off = tau * std::ldexp(1.0, -static_cast<int>(j));
      for (double q : {p - off, p + off})
        if (q > 0.0 && q < horizon) t.push_back(q);
    }
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return from_times(std::move(t));
}

double TimePartition::tau() const {
  double m = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) m = std::max(m, times_[i] - times_[i - 1]);
  return m;
}

const CrackSet& DiscreteEvolution::interpolant(double t) const {
  const auto& ts = partition.times();
  if (steps.empty()) throw ValidationError("empty evolution");
  if (t <= 0.0) return steps.front().state;
  const auto it = std::lower_bound(ts.begin(), ts.end(), t);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - ts.begin()), steps.size() - 1);
  return steps[i].state;
}

DiscreteEvolution run_scheme(const RisInstance& inst, const TimePartition& partition, const CrackSet& k0,
                             const RunOptions& opts) {
  if (partition.steps() == 0) throw ValidationError("partition needs at least one step");
  if (k0.mesh() != inst.mesh) throw ValidationError("initial crack lives on a different mesh");
  DiscreteEvolution evo;
  evo.partition = partition;
  evo.viscous = inst.viscous;
  const auto& ts = partition.times();

  StepRecord first;
  first.t = ts[0];
  first.state = k0;
  first.energy = inst.energy(first.t, k0);
  first.power = inst.power(first.t, k0);
  if (opts.stability_audit) first.r = residual_stability(first.t, k0, inst).r;
  evo.steps.push_back(first);

  for (std::size_t i = 1; i < ts.size(); ++i) {
    const StepRecord& prev = evo.steps.back();
    const double t0 = ts[i - 1], t1 = ts[i];
    const double p0 = prev.power;
    const double p1 = inst.power_from_left(t1, prev.state);
    const double pm = inst.power(0.5 * (t0 + t1), prev.state);
    const double trap = 0.5 * (t1 - t0) * (p0 + p1);
    const double simpson = (t1 - t0) / 6.0 * (p0 + 4.0 * pm + p1);

    const StepResult st = incremental_step(t1, prev.state, inst);
    StepRecord rec;
    rec.t = t1;
    rec.state = st.state;
    rec.energy = st.energy;
    rec.power = inst.power(t1, st.state);
    rec.d = st.d.value();
    rec.delta = st.delta;
    rec.alpha = st.alpha;
    rec.competitors = st.competitors;
    rec.work = prev.work + trap;
    rec.work_error = prev.work_error + std::abs(simpson - trap);
    if (opts.stability_audit) rec.r = residual_stability(t1, st.state, inst).r;
    evo.steps.push_back(std::move(rec));
  }
  return evo;
}

DiscreteEvolution energetic_mode(RisInstance inst, const TimePartition& partition, const CrackSet& k0,
                                 const RunOptions& opts) {
  inst.viscous = false;
  return run_scheme(inst, partition, k0, opts);
}

std::vector<JumpRecord> detect_jumps(const DiscreteEvolution& evo, double threshold) {
  std::vector<double> moving;
  for (std::size_t i = 1; i < evo.steps.size(); ++i)
    if (evo.steps[i].d > 0.0) moving.push_back(evo.steps[i].d);
  double median = 0.0;
  if (!moving.empty()) {
    std::sort(moving.begin(), moving.end());
    const std::size_t n = moving.size();
    median = n % 2 ? moving[n / 2] : 0.5 * (moving[n / 2 - 1] + moving[n / 2]);
  }
  std::vector<JumpRecord> out;
  for (std::size_t i = 1; i < evo.steps.size(); ++i) {
    const auto& s = evo.steps[i];
    if (s.d <= 0.0) continue;
    if (!(s.d > threshold * median) && !(s.alpha > 0.0)) continue;
    JumpRecord j;
    j.index = i;
    j.t = s.t;
    j.left = evo.steps[i - 1].state;
    j.at = s.state;
    j.right = s.state;
    j.magnitude = s.d;
    j.alpha = s.alpha;
    out.push_back(std::move(j));
  }
  return out;
}

ComponentReport component_bound_check(const DiscreteEvolution& evo, const RisInstance& inst, double c_p) {
  ComponentReport rep;
  if (evo.steps.empty()) return rep;
  rep.initial = count_components(evo.steps.front().state);
  rep.bound = static_cast<double>(rep.initial) + std::exp(c_p * evo.partition.horizon()) *
                                                     (evo.steps.front().energy + 1.0) / inst.nucleation_weight();
  for (const auto& s : evo.steps) {
    const std::size_t n = count_components(s.state);
    rep.counts.push_back(n);
    rep.max_components = std::max(rep.max_components, n);
    if (static_cast<double>(n) > rep.bound) ++rep.violations;
  }
  return rep;
}

GronwallReport gronwall_check(const DiscreteEvolution& evo, double c_p) {
  GronwallReport rep;
  if (evo.steps.empty()) return rep;
  const double e0 = evo.steps.front().energy;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : evo.steps) {
    const double bound = (e0 + 1.0) * std::exp(c_p * s.t) - 1.0;
    const double excess = s.energy - bound;
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > 1e-12 * (1.0 + bound)) ++rep.violations;
  }
  return rep;
}

double power_bound_excess(const DiscreteEvolution& evo, double c_p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : evo.steps) worst = std::max(worst, std::abs(s.power) - c_p * (s.energy + 1.0));
  return worst;
}

RefineReport refine_study(const RisInstance& inst, const CrackSet& k0, double horizon,
                          const std::vector<std::size_t>& step_counts, const std::vector<double>& sample_times) {
  for (std::size_t i = 1; i < step_counts.size(); ++i)
    if (step_counts[i] <= step_counts[i - 1]) throw ValidationError("refinement step counts must increase");
  RefineReport rep;
  rep.steps = step_counts;
  rep.sample_times = sample_times;
  rep.resolution = inst.mesh->min_edge_length() / 16.0;
  RunOptions opts;
  opts.stability_audit = false;
  for (std::size_t n : step_counts) rep.runs.push_back(run_scheme(inst, TimePartition::uniform(horizon, n), k0, opts));
  for (std::size_t k = 1; k < rep.runs.size(); ++k) {
    std::vector<double> row;
    for (double t : sample_times)
      row.push_back(hausdorff(rep.runs[k - 1].interpolant(t), rep.runs[k].interpolant(t), rep.resolution).value);
    rep.distance.push_back(std::move(row));
  }
  return rep;
}

}  // namespace vefrac
