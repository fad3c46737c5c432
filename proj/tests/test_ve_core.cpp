#include <functional>
#include <limits>
#include <map>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "vefrac/error.hpp"
#include "vefrac/ve_core.hpp"

using namespace vefrac;
using namespace vefrac::testing;

namespace {

DissipationParams small_params() {
  DissipationParams p;
  p.lambda = 0.1;
  p.mu = 0.1;
  return p;
}

std::vector<std::size_t> first_edges(const MeshPtr& m, std::size_t n) {
  std::vector<std::size_t> pool;
  for (std::size_t e = 0; e < n && e < m->num_edges(); ++e) pool.push_back(e);
  return pool;
}

std::vector<std::size_t> random_pool(const MeshPtr& m, std::mt19937& rng, std::size_t n) {
  std::vector<std::size_t> all(m->num_edges());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(n);
  return all;
}

// min over every superset K' of K inside K u pool of E + D, by direct
// enumeration of the 2^|free| subsets.
double full_lattice_min(double t, const CrackSet& k, const std::vector<std::size_t>& pool,
                        const RisInstance& inst) {
  std::vector<std::size_t> free;
  for (std::size_t e : pool)
    if (!k.contains(e)) free.push_back(e);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
    CrackSet c = k;
    for (std::size_t j = 0; j < free.size(); ++j)
      if (mask >> j & 1U) c.insert(free[j]);
    best = std::min(best, inst.energy(t, c) + big_d(k, c, inst.params).value());
  }
  return best;
}

// Minimum over all strictly increasing chains from K- to K+ of the folded hop
// weights, with every ingredient taken from the public primitives.
class ChainOracle {
 public:
  ChainOracle(double t, const CrackSet& km, const CrackSet& kp, const RisInstance& inst, HopForm form)
      : t_(t), km_(km), inst_(inst), form_(form), gap_(kp.minus(km).edge_list()) {}

  double best() {
    const std::size_t full = (std::size_t{1} << gap_.size()) - 1;
    best_ = std::numeric_limits<double>::infinity();
    if (full == 0) return 0.0;
    walk(0, 0.0, full);
    return best_;
  }

 private:
  CrackSet state(std::size_t m) const {
    CrackSet s = km_;
    for (std::size_t j = 0; j < gap_.size(); ++j)
      if (m >> j & 1U) s.insert(gap_[j]);
    return s;
  }
  double r(std::size_t m) {
    auto it = r_.find(m);
    if (it != r_.end()) return it->second;
    return r_[m] = residual_stability(t_, state(m), inst_).r;
  }
  double weight(std::size_t a, std::size_t b) {
    auto key = std::make_pair(a, b);
    auto it = w_.find(key);
    if (it != w_.end()) return it->second;
    const CrackSet sa = state(a), sb = state(b);
    const double delta = inst_.viscous ? delta_integral(sa, sb, inst_.params).value() : 0.0;
    return w_[key] = hop_weight(r(a), h1_diff(sa, sb), delta, alpha(sa, sb).value(),
                                inst_.nucleation_weight(), form_);
  }
  void walk(std::size_t m, double acc, std::size_t full) {
    if (m == full) {
      best_ = std::min(best_, acc);
      return;
    }
    const std::size_t rest = full & ~m;
    for (std::size_t s = rest; s != 0; s = (s - 1) & rest) walk(m | s, acc + weight(m, m | s), full);
  }

  double t_;
  CrackSet km_;
  const RisInstance& inst_;
  HopForm form_;
  std::vector<std::size_t> gap_;
  std::map<std::size_t, double> r_;
  std::map<std::pair<std::size_t, std::size_t>, double> w_;
  double best_ = 0.0;
};

}  // namespace

TEST_CASE("subset generator") {
  auto m = grid(2, 2);
  auto gen = CompetitorGenerator::subsets({5, 3, 9, 3, 12}, 2);
  CHECK(gen.pool() == std::vector<std::size_t>{3, 5, 9, 12});
  CrackSet k(m);
  k.insert(5);
  auto c = gen.enumerate(k);
  REQUIRE(c.size() == 1 + 3 + 3);
  CHECK(c.front() == k);
  for (std::size_t i = 1; i < c.size(); ++i) {
    CHECK(canonical_less(c[i - 1], c[i]));
    CHECK(k.subset_of(c[i]));
  }
  CHECK(gen.moves(k) == std::vector<std::size_t>{3, 9, 12});
  CHECK_THROWS_AS(CompetitorGenerator::subsets(first_edges(m, 16), 8).enumerate(CrackSet(m), 1000),
                  ValidationError);
}

TEST_CASE("path generator grows prefixes only") {
  auto m = grid(4, 4);
  auto gen = CompetitorGenerator::paths({{1, 2, 3}, {10, 11}}, 2);
  CrackSet k(m);
  k.insert(1);
  k.insert(3);  // not part of the prefix of path 0
  auto c = gen.enumerate(k);
  // Extensions (x0, x1) with x0 + x1 <= 2; x0 = 1 and x0 = 2 give the same set
  // since edge 3 is already in K.
  CHECK(c.size() == 5);
  CHECK(c.front() == k);
  CHECK(gen.moves(k) == std::vector<std::size_t>{2, 10});
  CrackSet grown = k;
  grown.insert(2);
  CHECK(gen.moves(grown) == std::vector<std::size_t>{10});
}

TEST_CASE("residual stability") {
  auto m = grid(4, 4);
  std::mt19937 rng(3);
  SUBCASE("zero load") {
    auto inst = toy_instance(m, CompetitorGenerator::subsets(first_edges(m, 12), 3), 1, small_params());
    auto rep = residual_stability(0.0, CrackSet(m), inst);
    CHECK(rep.r == 0.0);
    CHECK(rep.stable);
    CHECK(rep.minimizers.size() == 1);
  }
  SUBCASE("full lattice oracle on a 10-edge pool") {
    for (int it = 0; it < 6; ++it) {
      auto pool = random_pool(m, rng, 10);
      auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 10), 10 + it, small_params());
      CrackSet k(m);
      k.insert(pool[0]);
      for (double t : {0.5, 1.0, 2.0}) {
        auto rep = residual_stability(t, k, inst);
        CHECK(rep.r >= 0.0);
        CHECK(rep.r == inst.energy(t, k) - full_lattice_min(t, k, pool, inst));
        const bool k_in_m = std::find(rep.minimizers.begin(), rep.minimizers.end(), k) != rep.minimizers.end();
        CHECK(k_in_m == (rep.r == 0.0));
      }
    }
  }
}

TEST_CASE("incremental step") {
  auto m = grid(4, 4);
  std::mt19937 rng(5);
  auto pool = random_pool(m, rng, 10);
  auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 3), 7, small_params());
  CHECK(incremental_step(0.0, CrackSet(m), inst).state == CrackSet(m));

  SUBCASE("single candidate threshold") {
    auto one = toy_instance(m, CompetitorGenerator::subsets({pool[0]}, 1), 7, small_params());
    CrackSet k(m), grown(m);
    grown.insert(pool[0]);
    const double dcost = big_d(k, grown, one.params).value();
    for (double t : {0.2, 0.5, 0.8, 1.0, 1.5, 3.0}) {
      const bool extends = one.energy(t, CrackSet(m)) - one.energy(t, grown) > dcost;
      CHECK((incremental_step(t, k, one).state == grown) == extends);
    }
  }
  SUBCASE("certificate and irreversibility along a run") {
    CrackSet k(m);
    for (int i = 1; i <= 20; ++i) {
      const double t = 0.2 * i;
      auto st = incremental_step(t, k, inst);
      CHECK(k.subset_of(st.state));
      CHECK(step_certificate(t, k, st.state, inst) == 0.0);
      CHECK(st.energy + big_d(k, st.state, inst.params).value() <= inst.energy(t, k));
      k = st.state;
    }
    CHECK(!k.empty());
  }
  SUBCASE("greedy never beats exhaustive") {
    auto greedy = inst;
    greedy.greedy = true;
    CrackSet k(m);
    for (int i = 1; i <= 10; ++i) {
      const double t = 0.3 * i;
      auto ex = minimize_from(t, k, inst);
      auto gr = minimize_from(t, k, greedy);
      CHECK(gr.value >= ex.value);
      k = ex.argmin;
    }
  }
}

TEST_CASE("transition cost of explicit chains") {
  auto m = grid(4, 4);
  auto p = small_params();
  std::mt19937 rng(8);
  auto pool = random_pool(m, rng, 10);
  auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 3), 2, p);
  CrackSet a(m);
  CHECK(trc_chain(1.0, {a}, inst).value() == 0.0);

  // At zero load every state is stable, so only the hop terms remain.
  CrackSet b = a;
  b.insert(pool[0]);
  b.insert(pool[1]);
  CHECK(trc_chain(0.0, {a, b}, inst).value() ==
        doctest::Approx(delta_integral(a, b, p).value() + (p.lambda + p.mu) * alpha(a, b).value())
            .epsilon(1e-15));
  CHECK(trc_chain(1.0, {b, a}, inst).is_infinite());

  for (int it = 0; it < 10; ++it) {
    CrackSet k0(m);
    k0.insert(pool[it % 10]);
    CrackSet k1 = k0, k2;
    k1.insert(pool[(it + 3) % 10]);
    k2 = k1;
    k2.insert(pool[(it + 5) % 10]);
    k2.insert(pool[(it + 7) % 10]);
    const double t = 1.5;
    double ledger = 0.0;
    for (auto [x, y] : {std::pair{k0, k1}, std::pair{k1, k2}}) {
      ledger += delta_integral(x, y, p).value();
      ledger += (p.lambda + p.mu) * alpha(x, y).value();
      ledger += residual_stability(t, x, inst).r;
    }
    CHECK(trc_chain(t, {k0, k1, k2}, inst).value() == doctest::Approx(ledger).epsilon(1e-13));
  }
}

TEST_CASE("jump cost equals brute-force chain enumeration") {
  auto m = grid(4, 4);
  std::mt19937 rng(11);
  for (int it = 0; it < 6; ++it) {
    auto pool = random_pool(m, rng, 12);
    auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 2), 20 + it, small_params());
    if (it % 2) inst.viscous = false;
    CrackSet km(m);
    km.insert(pool[0]);
    CrackSet kp = km;
    for (std::size_t j = 1; j <= 5; ++j) kp.insert(pool[j]);
    const double t = 1.0 + 0.3 * it;
    for (HopForm form : {HopForm::Ve, HopForm::Original}) {
      JumpCostOptions opts;
      opts.form = form;
      auto res = jump_cost(t, km, kp, inst, opts);
      ChainOracle oracle(t, km, kp, inst, form);
      CHECK(res.cost.value() == oracle.best());
      CHECK(trc_chain(t, res.chain, inst, form).value() == res.cost.value());
      REQUIRE(res.chain.front() == km);
      REQUIRE(res.chain.back() == kp);
      CHECK(res.lattice_nodes == 32);
      CHECK(res.cost.value() >= inst.nucleation_weight() * alpha(km, kp).value());
    }
    // Original form differs by the telescoped length.
    JumpCostOptions orig;
    orig.form = HopForm::Original;
    const double c = jump_cost(t, km, kp, inst).cost.value();
    const double chat = jump_cost(t, km, kp, inst, orig).cost.value();
    CHECK(std::abs(chat - c - h1_diff(km, kp)) <= 1e-12);
    CHECK(incremental_jump_cost(t, km, kp, inst) == chat - dist_d(km, kp, inst.params).value());
  }
}

TEST_CASE("jump cost edge cases and restriction") {
  auto m = grid(4, 4);
  std::mt19937 rng(13);
  auto pool = random_pool(m, rng, 12);
  auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 2), 3, small_params());
  CrackSet km(m);
  km.insert(pool[0]);
  CHECK(jump_cost(1.0, km, km, inst).cost.value() == 0.0);
  CHECK(jump_cost(1.0, km, CrackSet(m), inst).cost.is_infinite());
  CHECK_THROWS_AS(incremental_jump_cost(1.0, km, CrackSet(m), inst), ValidationError);
  CrackSet kp = km;
  for (std::size_t j = 1; j <= 4; ++j) kp.insert(pool[j]);
  JumpCostOptions tight;
  tight.cap = 3;
  CHECK_THROWS_AS(jump_cost(1.0, km, kp, inst, tight), ValidationError);

  const double t = 2.0;
  const double whole = jump_cost(t, km, kp, inst).cost.value();
  JumpCostOptions restricted;
  restricted.allow = [&](const CrackSet& s) { return !s.contains(pool[1]) || s.contains(pool[2]); };
  CHECK(jump_cost(t, km, kp, inst, restricted).cost.value() >= whole);
  JumpCostOptions direct;
  direct.allow = [](const CrackSet&) { return false; };
  auto single = jump_cost(t, km, kp, inst, direct);
  CHECK(single.chain.size() == 2);
  CHECK(single.cost.value() >= whole);
}

TEST_CASE("transition decomposition") {
  auto m = grid(4, 4);
  std::mt19937 rng(17);
  auto pool = random_pool(m, rng, 10);
  auto inst = toy_instance(m, CompetitorGenerator::subsets(pool, 2), 4, small_params());
  CrackSet a(m), b(m);
  b.insert(pool[0]);
  auto one = decompose_transition({a, b}, 1.0, inst);
  REQUIRE(one.size() == 1);
  CHECK(one[0].kind == SegmentKind::Sliding);
  CHECK(one[0].last == 1);

  // Labels follow R at the interior states.
  for (int it = 0; it < 10; ++it) {
    std::vector<CrackSet> chain{CrackSet(m)};
    for (std::size_t j = 0; j < 4; ++j) {
      chain.push_back(chain.back());
      chain.back().insert(pool[(it + 2 * j) % 10]);
    }
    const double t = 0.5 + 0.4 * it;
    auto segs = decompose_transition(chain, t, inst);
    REQUIRE(!segs.empty());
    CHECK(segs.front().first == 0);
    CHECK(segs.back().last == chain.size() - 1);
    for (const auto& s : segs) {
      for (std::size_t i = s.first + 1; i < s.last; ++i) {
        const bool stable = residual_stability(t, chain[i], inst).stable;
        CHECK(stable == (s.kind == SegmentKind::Sliding));
      }
      if (s.kind == SegmentKind::Sliding) CHECK(s.recursion_violations.empty());
    }
    for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].kind != segs[i - 1].kind);
  }
}

TEST_CASE("energetic instance drops delta") {
  auto m = grid(4, 4);
  auto inst = toy_instance(m, CompetitorGenerator::subsets(first_edges(m, 6), 2), 1, small_params());
  inst.viscous = false;
  CrackSet a(m), b(m);
  b.insert(0);
  CHECK(inst.delta(a, b).value() == 0.0);
  CHECK(inst.big_d(a, b) == dist_d(a, b, inst.params));
  CHECK(inst.nucleation_weight() == inst.params.lambda);
  CHECK(incremental_step(1.0, a, inst).delta == 0.0);
}
