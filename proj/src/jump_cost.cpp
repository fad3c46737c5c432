#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "vefrac/error.hpp"
#include "vefrac/ve_core.hpp"

namespace vefrac {

namespace {

using Mask = std::uint32_t;
constexpr Mask kNone = std::numeric_limits<Mask>::max();

// Canonical order restricted to one interval lattice: fewer bits first, then
// the set holding the lowest differing bit.
bool mask_less(Mask a, Mask b) {
  if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
  if (a == b) return false;
  const Mask low = (a ^ b) & (~(a ^ b) + 1);
  return (a & low) != 0;
}

std::vector<Mask> chain_of(Mask m, const std::vector<Mask>& pred) {
  std::vector<Mask> c;
  for (Mask x = m; x != kNone; x = pred[x]) c.push_back(x);
  std::reverse(c.begin(), c.end());
  return c;
}

bool chain_less(const std::vector<Mask>& a, const std::vector<Mask>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), mask_less);
}

}  // namespace

double hop_weight(double r, double h1, double delta, double alpha, double w, HopForm form) {
  if (form == HopForm::Ve) return (r + delta) + w * alpha;
  return ((r + h1) + delta) + w * alpha;
}

Cost trc_chain(double t, const std::vector<CrackSet>& chain, const RisInstance& inst, HopForm form) {
  double total = 0.0;
  for (std::size_t n = 1; n < chain.size(); ++n) {
    const CrackSet& a = chain[n - 1];
    const CrackSet& b = chain[n];
    require_same_mesh(a, b);
    if (!a.subset_of(b)) return Cost::infinite();
  }
  for (std::size_t n = 1; n < chain.size(); ++n) {
    const CrackSet& a = chain[n - 1];
    const CrackSet& b = chain[n];
    const double r = residual_stability(t, a, inst).r;
    const double delta = inst.viscous ? AtwIntegrator(a, inst.params.quadrature_order).integral(b) : 0.0;
    total += hop_weight(r, h1_diff(a, b), delta, alpha(a, b).value(), inst.nucleation_weight(), form);
  }
  return Cost::finite(total);
}

JumpCostResult jump_cost(double t, const CrackSet& k_minus, const CrackSet& k_plus, const RisInstance& inst,
                         const JumpCostOptions& opts) {
  require_same_mesh(k_minus, k_plus);
  JumpCostResult res;
  if (!k_minus.subset_of(k_plus)) {
    res.cost = Cost::infinite();
    return res;
  }
  const auto gap = k_plus.minus(k_minus).edge_list();
  const std::size_t g = gap.size();
  if (g > opts.cap || g > 24)
    throw ValidationError("jump lattice has " + std::to_string(g) + " free edges, above the cap of " +
                          std::to_string(opts.cap) + "; restrict the lattice");
  if (g == 0) {
    res.cost = Cost::finite(0.0);
    res.chain = {k_minus};
    res.lattice_nodes = 1;
    res.segments = decompose_transition(res.chain, t, inst);
    return res;
  }

  const Mask full = (Mask{1} << g) - 1;
  const std::size_t n = std::size_t{full} + 1;
  auto state = [&](Mask m) {
    CrackSet s = k_minus;
    for (std::size_t j = 0; j < g; ++j)
      if (m >> j & 1U) s.insert(gap[j]);
    return s;
  };
  auto gap_index = [&](std::size_t e) {
    return static_cast<std::size_t>(std::lower_bound(gap.begin(), gap.end(), e) - gap.begin());
  };

  std::vector<char> allowed(n, 1);
  if (opts.allow)
    for (Mask m = 1; m < full; ++m) allowed[m] = opts.allow(state(m)) ? 1 : 0;

  const double w = inst.nucleation_weight();
  std::vector<double> r(n, 0.0), len(g);
  for (std::size_t j = 0; j < g; ++j) len[j] = inst.mesh->edges()[gap[j]].length;
  std::vector<double> integ(inst.viscous ? n * g : 0, 0.0);
  // Components of each node containing no edge of K-, as gap masks.
  std::vector<std::vector<Mask>> free_comp(n);
  for (Mask m = 0; m <= full; ++m) {
    if (!allowed[m]) continue;
    ++res.lattice_nodes;
    const CrackSet s = state(m);
    if (m != full) {
      r[m] = residual_stability(t, s, inst).r;
      if (inst.viscous) {
        AtwIntegrator atw(s, inst.params.quadrature_order);
        for (std::size_t j = 0; j < g; ++j)
          if (!(m >> j & 1U)) integ[std::size_t{m} * g + j] = atw.edge_integral(gap[j]);
      }
    }
    for (const auto& comp : connected_components(s)) {
      Mask cm = 0;
      bool anchored = false;
      for (std::size_t e : comp.edge_list()) {
        if (k_minus.contains(e))
          anchored = true;
        else
          cm |= Mask{1} << gap_index(e);
      }
      if (!anchored) free_comp[m].push_back(cm);
    }
  }

  // Hops only go to strict supersets, so increasing mask order is topological.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::uint32_t> hops(n, 0);
  std::vector<Mask> pred(n, kNone);
  dist[0] = 0.0;
  for (Mask m = 0; m < full; ++m) {
    if (!allowed[m] || dist[m] == inf) continue;
    const Mask rest = full & ~m;
    for (Mask s = rest; s != 0; s = (s - 1) & rest) {
      const Mask m2 = m | s;
      if (!allowed[m2]) continue;
      double h1 = 0.0, delta = 0.0;
      for (std::size_t j = 0; j < g; ++j) {
        if (!(s >> j & 1U)) continue;
        h1 += len[j];
        if (inst.viscous) delta += integ[std::size_t{m} * g + j];
      }
      double a = 0.0;
      for (Mask c : free_comp[m2]) a += (c & m) == 0 ? 1.0 : 0.0;
      const double cand = dist[m] + hop_weight(r[m], h1, delta, a, w, opts.form);
      bool take = cand < dist[m2];
      if (!take && cand == dist[m2]) {
        if (hops[m] + 1 < hops[m2]) {
          take = true;
        } else if (hops[m] + 1 == hops[m2]) {
          take = chain_less(chain_of(m, pred), chain_of(pred[m2], pred));
        }
      }
      if (take) {
        dist[m2] = cand;
        hops[m2] = hops[m] + 1;
        pred[m2] = m;
      }
    }
  }

  res.cost = Cost::finite(dist[full]);
  const auto masks = chain_of(full, pred);
  for (Mask m : masks) res.chain.push_back(state(m));
  for (std::size_t i = 1; i < masks.size(); ++i) {
    const Mask a = masks[i - 1], b = masks[i];
    HopLedger hop;
    hop.from = res.chain[i - 1];
    hop.to = res.chain[i];
    hop.r = r[a];
    for (std::size_t j = 0; j < g; ++j) {
      if (!((b & ~a) >> j & 1U)) continue;
      hop.h1 += len[j];
      if (inst.viscous) hop.delta += integ[std::size_t{a} * g + j];
    }
    for (Mask c : free_comp[b]) hop.alpha += (c & a) == 0 ? 1.0 : 0.0;
    hop.weight = hop_weight(hop.r, hop.h1, hop.delta, hop.alpha, w, opts.form);
    res.hops.push_back(std::move(hop));
  }
  res.segments = decompose_transition(res.chain, t, inst);
  return res;
}

double incremental_jump_cost(double t, const CrackSet& k_minus, const CrackSet& k_plus,
                             const RisInstance& inst, std::size_t cap) {
  require_same_mesh(k_minus, k_plus);
  if (!k_minus.subset_of(k_plus)) throw ValidationError("incremental cost needs nested states");
  JumpCostOptions opts;
  opts.cap = cap;
  opts.form = HopForm::Original;
  return jump_cost(t, k_minus, k_plus, inst, opts).cost.value() - inst.d(k_minus, k_plus).value();
}

std::vector<TransitionSegment> decompose_transition(const std::vector<CrackSet>& chain, double t,
                                                    const RisInstance& inst) {
  std::vector<TransitionSegment> out;
  if (chain.size() <= 2) {
    TransitionSegment s;
    s.last = chain.empty() ? 0 : chain.size() - 1;
    out.push_back(s);
    return out;
  }
  std::vector<StabilityReport> rep;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) rep.push_back(residual_stability(t, chain[i], inst));
  auto kind_at = [&](std::size_t i) { return rep[i].stable ? SegmentKind::Sliding : SegmentKind::Viscous; };

  std::size_t i = 1;
  while (i + 1 < chain.size()) {
    std::size_t j = i;
    while (j + 2 < chain.size() && kind_at(j + 1) == kind_at(i)) ++j;
    TransitionSegment s;
    s.first = i - 1;
    s.last = j + 1;
    s.kind = kind_at(i);
    if (s.kind == SegmentKind::Viscous) {
      for (std::size_t k = s.first + 1; k <= s.last; ++k) {
        const auto& mins = rep[k - 1].minimizers;
        if (std::find(mins.begin(), mins.end(), chain[k]) == mins.end()) s.recursion_violations.push_back(k);
      }
    }
    out.push_back(std::move(s));
    i = j + 1;
  }
  return out;
}

std::string to_string(SegmentKind kind) { return kind == SegmentKind::Sliding ? "sliding" : "viscous"; }

}  // namespace vefrac
