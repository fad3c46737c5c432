#include "vefrac/ve_core.hpp"

#include <algorithm>
#include <limits>

#include "vefrac/elastic.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

namespace {

// Number of subsets of size <= b of an n-set, saturating at `cap` + 1.
std::size_t bounded_count(std::size_t n, std::size_t b, std::size_t cap) {
  std::size_t total = 0;
  double binom = 1.0;
  for (std::size_t j = 0; j <= std::min(n, b); ++j) {
    if (j > 0) binom = binom * static_cast<double>(n - j + 1) / static_cast<double>(j);
    if (binom > static_cast<double>(cap)) return cap + 1;
    total += static_cast<std::size_t>(binom + 0.5);
    if (total > cap) return cap + 1;
  }
  return total;
}

void overflow(std::size_t limit) {
  throw ValidationError("competitor generation exceeds " + std::to_string(limit) +
                        " sets; lower the budget or use greedy search");
}

std::size_t prefix_length(const std::vector<std::size_t>& path, const CrackSet& k) {
  std::size_t p = 0;
  while (p < path.size() && k.contains(path[p])) ++p;
  return p;
}

}  // namespace

CompetitorGenerator CompetitorGenerator::subsets(std::vector<std::size_t> pool, std::size_t budget) {
  CompetitorGenerator g;
  g.kind_ = Kind::Subsets;
  g.budget_ = budget;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  g.pool_ = std::move(pool);
  return g;
}

CompetitorGenerator CompetitorGenerator::paths(std::vector<std::vector<std::size_t>> paths,
                                               std::size_t budget) {
  CompetitorGenerator g;
  g.kind_ = Kind::Paths;
  g.budget_ = budget;
  for (const auto& p : paths) g.pool_.insert(g.pool_.end(), p.begin(), p.end());
  std::sort(g.pool_.begin(), g.pool_.end());
  g.pool_.erase(std::unique(g.pool_.begin(), g.pool_.end()), g.pool_.end());
  g.paths_ = std::move(paths);
  return g;
}

std::vector<CrackSet> CompetitorGenerator::enumerate(const CrackSet& k, std::size_t limit) const {
  std::vector<CrackSet> out;
  if (kind_ == Kind::Subsets) {
    std::vector<std::size_t> avail;
    for (std::size_t e : pool_)
      if (!k.contains(e)) avail.push_back(e);
    const std::size_t n = avail.size();
    if (bounded_count(n, budget_, limit) > limit) overflow(limit);
    out.push_back(k);
    // Combinations by size, each size in lexicographic order: already canonical.
    for (std::size_t size = 1; size <= std::min(n, budget_); ++size) {
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        CrackSet c = k;
        for (std::size_t i : idx) c.insert(avail[i]);
        out.push_back(std::move(c));
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return out;
  }

  std::vector<std::size_t> start(paths_.size()), room(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    start[i] = prefix_length(paths_[i], k);
    room[i] = paths_[i].size() - start[i];
  }
  std::vector<std::size_t> ext(paths_.size(), 0);
  // Depth-first over extension lengths with total <= budget.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == paths_.size()) {
      CrackSet c = k;
      for (std::size_t p = 0; p < paths_.size(); ++p)
        for (std::size_t j = 0; j < ext[p]; ++j) c.insert(paths_[p][start[p] + j]);
      out.push_back(std::move(c));
      if (out.size() > limit) overflow(limit);
      return;
    }
    for (std::size_t x = 0; x <= std::min(room[i], budget_ - used); ++x) {
      ext[i] = x;
      rec(i + 1, used + x);
    }
    ext[i] = 0;
  };
  rec(0, 0);
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> CompetitorGenerator::moves(const CrackSet& k) const {
  std::vector<std::size_t> out;
  if (kind_ == Kind::Subsets) {
    for (std::size_t e : pool_)
      if (!k.contains(e)) out.push_back(e);
    return out;
  }
  for (const auto& p : paths_) {
    const std::size_t s = prefix_length(p, k);
    if (s < p.size()) out.push_back(p[s]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Cost RisInstance::delta(const CrackSet& h, const CrackSet& k) const {
  if (viscous) return delta_atw(h, k, params);
  require_same_mesh(h, k);
  return h.subset_of(k) ? Cost::finite(0.0) : Cost::infinite();
}

Cost RisInstance::big_d(const CrackSet& h, const CrackSet& k) const {
  return viscous ? vefrac::big_d(h, k, params) : dist_d(h, k, params);
}

double RisInstance::power_from_left(double t, const CrackSet& k) const {
  return power_left ? power_left(t, k) : power(t, k);
}

RisInstance fem_instance(std::shared_ptr<const EnergyModel> model, DissipationParams params,
                         CompetitorGenerator generator, unsigned threads) {
  validate(params);
  RisInstance inst;
  inst.mesh = model->mesh();
  inst.params = params;
  inst.generator = std::move(generator);
  inst.energy = [model](double t, const CrackSet& k) { return model->energy(t, k); };
  inst.power = [model](double t, const CrackSet& k) { return model->power(t, k); };
  inst.power_left = [model](double t, const CrackSet& k) { return model->power_left(t, k); };
  if (threads > 1)
    inst.prefetch = [model, threads](const std::vector<CrackSet>& sets) { model->prefetch(sets, threads); };
  return inst;
}

SearchResult minimize_from(double t, const CrackSet& k, const RisInstance& inst) {
  SearchResult res;
  res.start_energy = inst.energy(t, k);
  if (inst.greedy) {
    CrackSet cur = k;
    double best = res.start_energy;
    for (std::size_t step = 0; step < inst.generator.budget(); ++step) {
      const auto moves = inst.generator.moves(cur);
      if (moves.empty()) break;
      std::vector<CrackSet> cands;
      for (std::size_t e : moves) {
        cands.push_back(cur);
        cands.back().insert(e);
      }
      if (inst.prefetch) inst.prefetch(cands);
      res.competitors += cands.size();
      std::size_t pick = cands.size();
      double pick_value = best;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const double v = inst.energy(t, cands[i]) + inst.big_d(k, cands[i]).value();
        if (v < pick_value) {
          pick_value = v;
          pick = i;
        }
      }
      if (pick == cands.size()) break;
      cur = cands[pick];
      best = pick_value;
    }
    res.argmin = cur;
    res.value = best;
    res.minimizers = {cur};
    res.competitors += 1;
    return res;
  }

  const auto comps = inst.generator.enumerate(k);
  if (inst.prefetch) inst.prefetch(comps);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : comps) {
    const Cost dc = inst.big_d(k, c);
    if (dc.is_infinite()) continue;
    const double v = inst.energy(t, c) + dc.value();
    if (v < best) {
      best = v;
      res.minimizers.clear();
      res.minimizers.push_back(c);
    } else if (v == best) {
      res.minimizers.push_back(c);
    }
  }
  res.competitors = comps.size();
  res.value = best;
  res.argmin = res.minimizers.front();
  return res;
}

StabilityReport residual_stability(double t, const CrackSet& k, const RisInstance& inst) {
  auto s = minimize_from(t, k, inst);
  StabilityReport rep;
  rep.energy = s.start_energy;
  rep.r = s.start_energy - s.value;
  if (!(rep.r >= 0.0)) throw NumericalError("residual stability came out negative");
  rep.minimizers = std::move(s.minimizers);
  rep.competitors = s.competitors;
  rep.stable = rep.r <= inst.stab_tol(rep.energy);
  return rep;
}

StepResult incremental_step(double t, const CrackSet& k_prev, const RisInstance& inst) {
  auto s = minimize_from(t, k_prev, inst);
  StepResult st;
  st.state = s.argmin;
  st.energy = inst.energy(t, st.state);
  st.d = inst.d(k_prev, st.state);
  st.delta = inst.viscous ? delta_integral(k_prev, st.state, inst.params).value() : 0.0;
  st.alpha = alpha(k_prev, st.state).value();
  st.competitors = s.competitors;
  return st;
}

double step_certificate(double t, const CrackSet& k_prev, const CrackSet& k, const RisInstance& inst) {
  const Cost dk = inst.big_d(k_prev, k);
  if (dk.is_infinite()) return std::numeric_limits<double>::infinity();
  const double fk = inst.energy(t, k) + dk.value();
  double least = fk;
  const auto comps = inst.generator.enumerate(k_prev);
  if (inst.prefetch) inst.prefetch(comps);
  for (const auto& c : comps) least = std::min(least, inst.energy(t, c) + inst.big_d(k_prev, c).value());
  return fk - least;
}

}  // namespace vefrac
