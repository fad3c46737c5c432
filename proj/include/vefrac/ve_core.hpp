#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vefrac/dissipation.hpp"
#include "vefrac/geometry.hpp"

namespace vefrac {

class EnergyModel;

// Enumerates the competitors K' of a state K: supersets inside K u pool with
// at most `budget` new edges. In path mode the pool is a list of edge paths
// and each path may only grow from the end of its longest prefix already in K.
class CompetitorGenerator {
 public:
  enum class Kind { Subsets, Paths };
  static constexpr std::size_t kMaxCompetitors = std::size_t{1} << 20;

  CompetitorGenerator() = default;
  static CompetitorGenerator subsets(std::vector<std::size_t> pool, std::size_t budget);
  static CompetitorGenerator paths(std::vector<std::vector<std::size_t>> paths, std::size_t budget);

  Kind kind() const { return kind_; }
  std::size_t budget() const { return budget_; }
  // Every edge the generator can add, sorted.
  const std::vector<std::size_t>& pool() const { return pool_; }
  const std::vector<std::vector<std::size_t>>& path_list() const { return paths_; }

  // K first, then the others in canonical order. Throws ValidationError when
  // there would be more than `limit`.
  std::vector<CrackSet> enumerate(const CrackSet& k, std::size_t limit = kMaxCompetitors) const;
  // Single edges that may be added to K (greedy moves).
  std::vector<std::size_t> moves(const CrackSet& k) const;

 private:
  Kind kind_ = Kind::Subsets;
  std::size_t budget_ = 0;
  std::vector<std::size_t> pool_;
  std::vector<std::vector<std::size_t>> paths_;
};

using EnergyFn = std::function<double(double, const CrackSet&)>;

// A rate-independent system on the finite lattice of edge sets.
struct RisInstance {
  MeshPtr mesh;
  DissipationParams params;
  // false drops delta entirely (the classical energetic scheme).
  bool viscous = true;
  CompetitorGenerator generator;
  bool greedy = false;
  double stab_rel = 1e-9;

  EnergyFn energy;
  EnergyFn power;
  EnergyFn power_left;  // may be empty; falls back to power
  // Optional warm-up called with every batch of sets about to be evaluated.
  std::function<void(const std::vector<CrackSet>&)> prefetch;

  double nucleation_weight() const { return params.lambda + (viscous ? params.mu : 0.0); }
  Cost d(const CrackSet& h, const CrackSet& k) const { return dist_d(h, k, params); }
  Cost delta(const CrackSet& h, const CrackSet& k) const;
  Cost big_d(const CrackSet& h, const CrackSet& k) const;
  double stab_tol(double e) const { return stab_rel * (1.0 + e); }
  double power_from_left(double t, const CrackSet& k) const;
};

// Instance backed by FEM energies; prefetch fans out over `threads` workers.
RisInstance fem_instance(std::shared_ptr<const EnergyModel> model, DissipationParams params,
                         CompetitorGenerator generator, unsigned threads = 1);

// Minimization of E(t,.) + D(K,.) over the competitors of K.
struct SearchResult {
  CrackSet argmin;  // first minimizer in canonical order
  double value = 0.0;
  double start_energy = 0.0;  // E(t,K)
  std::vector<CrackSet> minimizers;
  std::size_t competitors = 0;
};

SearchResult minimize_from(double t, const CrackSet& k, const RisInstance& inst);

struct StabilityReport {
  double r = 0.0;
  double energy = 0.0;
  std::vector<CrackSet> minimizers;
  std::size_t competitors = 0;
  bool stable = false;  // r <= stab_tol(energy)
};

StabilityReport residual_stability(double t, const CrackSet& k, const RisInstance& inst);

struct StepResult {
  CrackSet state;
  double energy = 0.0;  // E(t, state)
  Cost d;
  double delta = 0.0;  // the integral part
  double alpha = 0.0;
  std::size_t competitors = 0;
};

StepResult incremental_step(double t, const CrackSet& k_prev, const RisInstance& inst);

// E(t,K) + D(K_prev,K) minus the least E(t,K') + D(K_prev,K') over every
// exhaustively enumerated competitor K' of K_prev; 0 certifies the step.
double step_certificate(double t, const CrackSet& k_prev, const CrackSet& k, const RisInstance& inst);

// Weight of one hop theta -> theta' of a transition chain. `ve` form:
// R(theta) + Delta + w * alpha; original form: R(theta) + H1 + Delta + w * alpha,
// with w the nucleation weight of the instance. Chains fold hops left to right.
enum class HopForm { Ve, Original };
double hop_weight(double r, double h1, double delta, double alpha, double w, HopForm form);

Cost trc_chain(double t, const std::vector<CrackSet>& chain, const RisInstance& inst,
               HopForm form = HopForm::Ve);

struct HopLedger {
  CrackSet from;
  CrackSet to;
  double r = 0.0;
  double h1 = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double weight = 0.0;
};

enum class SegmentKind { Sliding, Viscous };

struct TransitionSegment {
  std::size_t first = 0;  // chain indices, inclusive
  std::size_t last = 0;
  SegmentKind kind = SegmentKind::Sliding;
  // Indices n in (first, last] where theta_n is not a minimizer from theta_{n-1}.
  std::vector<std::size_t> recursion_violations;
};

struct JumpCostResult {
  Cost cost;
  std::vector<CrackSet> chain;
  std::vector<HopLedger> hops;
  std::vector<TransitionSegment> segments;
  std::size_t lattice_nodes = 0;
};

struct JumpCostOptions {
  std::size_t cap = 16;
  HopForm form = HopForm::Ve;
  // Restricts intermediate states; endpoints are always allowed.
  std::function<bool(const CrackSet&)> allow;
};

// Minimal chain cost from K- to K+ over the interval lattice, by shortest
// path. Ties go to fewer hops, then to the lexicographically smaller chain.
JumpCostResult jump_cost(double t, const CrackSet& k_minus, const CrackSet& k_plus, const RisInstance& inst,
                         const JumpCostOptions& opts = {});

// Original-form cost minus d(K-,K+). Throws ValidationError unless K- is a
// subset of K+.
double incremental_jump_cost(double t, const CrackSet& k_minus, const CrackSet& k_plus,
                             const RisInstance& inst, std::size_t cap = 16);

// Splits a chain into maximal sliding and viscous runs by R at interior
// states and checks the minimizer recursion on viscous runs.
std::vector<TransitionSegment> decompose_transition(const std::vector<CrackSet>& chain, double t,
                                                    const RisInstance& inst);

std::string to_string(SegmentKind kind);

}  // namespace vefrac
