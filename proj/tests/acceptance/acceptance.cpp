// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Usage: acceptance <benchmark dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "text_util.hpp"
#include "vefrac/audits.hpp"
#include "vefrac/cli_io.hpp"
#include "vefrac/dissipation.hpp"
#include "vefrac/elastic.hpp"
#include "vefrac/evolution.hpp"
#include "vefrac/geometry.hpp"
#include "vefrac/griffith.hpp"
#include "vefrac/ve_core.hpp"

using namespace vefrac;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kSolverTol = 1e-10;      // affine and fully-cut energies
constexpr double kFdRel = 1e-5;           // power vs finite difference
constexpr double kQuadRel = 1e-10;        // adaptive quadrature in Delta
constexpr int kHausdorffSamples = 64;     // per edge, for the independent h
constexpr double kFormDiff = 1e-12;       // balance forms
constexpr double kGriffithTol = 0.2;      // |kappa^2 - 1| and complementarity
constexpr double kEstimatorGap = 0.15;    // FD energy release vs kappa^2
constexpr double kMinutes1 = 60.0;
constexpr double kMinutes5 = 300.0;
constexpr double kMinutes10 = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Run {
  std::string name;
  Archive archive;
  double seconds = 0.0;
};

RunConfig load_named(const fs::path& dir, const std::string& name) {
  if (dir.empty()) return benchmark_config(name);
  return load_config((dir / (name + ".ini")).string());
}

// ---------------------------------------------------------------- 1

// Base-3 code of a nested pair H <= K over the first n edges: digit 0 outside
// K, 1 in K \ H, 2 in H.
struct Ternary {
  explicit Ternary(std::size_t n) : n(n) {
    const std::size_t half = (n + 1) / 2;
    lo_bits = half;
    low.assign(std::size_t{1} << half, 0);
    high.assign(std::size_t{1} << (n - half), 0);
    for (std::size_t m = 0; m < low.size(); ++m) low[m] = encode(m, 0);
    for (std::size_t m = 0; m < high.size(); ++m) high[m] = encode(m, half);
  }
  std::size_t index(std::size_t h, std::size_t k) const {
    const std::size_t mask = (std::size_t{1} << lo_bits) - 1;
    return low[k & mask] + low[h & mask] + high[k >> lo_bits] + high[h >> lo_bits];
  }
  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < n; ++i) s *= 3;
    return s;
  }

 private:
  std::size_t encode(std::size_t m, std::size_t shift) const {
    std::size_t v = 0, p = 1;
    for (std::size_t i = 0; i < shift; ++i) p *= 3;
    for (std::size_t j = 0; m >> j; ++j, p *= 3)
      if (m >> j & 1U) v += p;
    return v;
  }
  std::size_t n;
  std::size_t lo_bits = 0;
  std::vector<std::size_t> low, high;
};

void criterion_1() {
  const auto t0 = Clock::now();
  const MeshPtr mesh = benchmark_config("hexagon-fan").mesh;
  const std::size_t n = mesh->num_edges();
  DissipationParams p;
  p.lambda = 0.3;
  p.mu = 0.7;
  const std::size_t full = std::size_t{1} << n;
  auto set_of = [&](std::size_t m) {
    CrackSet k(mesh);
    for (std::size_t e = 0; e < n; ++e)
      if (m >> e & 1U) k.insert(e);
    return k;
  };
  std::vector<CrackSet> sets;
  sets.reserve(full);
  for (std::size_t m = 0; m < full; ++m) sets.push_back(set_of(m));

  const Ternary code(n);
  std::vector<double> a(code.size()), d(code.size());
  std::size_t violations = 0, pairs = 0, triples = 0;
  for (std::size_t k = 0; k < full; ++k) {
    for (std::size_t h = k;; h = (h - 1) & k) {
      const Cost ca = alpha(sets[h], sets[k]);
      const Cost cd = dist_d(sets[h], sets[k], p);
      ++pairs;
      if (ca.is_infinite() || cd.is_infinite()) ++violations;
      a[code.index(h, k)] = ca.value_or(-1);
      d[code.index(h, k)] = cd.value_or(-1);
      // d(K,K) = 0, and d(H,K) = 0 only for H = K.
      if ((h == k) != (cd.value_or(1) == 0.0)) ++violations;
      if (h == 0) break;
    }
  }
  // Non-nested pairs are at infinite distance.
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, full - 1);
  for (int it = 0; it < 20000; ++it) {
    const std::size_t h = pick(rng), k = pick(rng);
    if ((h & ~k) == 0) continue;
    ++pairs;
    if (!dist_d(sets[h], sets[k], p).is_infinite() || !alpha(sets[h], sets[k]).is_infinite()) ++violations;
  }
  // Triangle inequalities over all chains H <= M <= K (every other triple has
  // an infinite right-hand side).
  for (std::size_t k = 0; k < full; ++k) {
    for (std::size_t m = k;; m = (m - 1) & k) {
      for (std::size_t h = m;; h = (h - 1) & m) {
        ++triples;
        const std::size_t hk = code.index(h, k), hm = code.index(h, m), mk = code.index(m, k);
        if (a[hk] > a[hm] + a[mk]) ++violations;
        if (d[hk] > d[hm] + d[mk] + 1e-12) ++violations;
        if (h == 0) break;
      }
      if (m == 0) break;
    }
  }
  const double secs = seconds_since(t0);
  report(1, violations == 0 && secs < kMinutes1,
         std::to_string(n) + " edges, " + std::to_string(pairs) + " pairs, " + std::to_string(triples) +
             " chains, " + std::to_string(violations) + " violations, " + fmt(secs) + " s");
}

// ---------------------------------------------------------------- 2

double point_segment(Point2 x, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  double s = l2 > 0 ? ((x.x - a.x) * dx + (x.y - a.y) * dy) / l2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(x.x - (a.x + s * dx), x.y - (a.y + s * dy));
}

// sup over K \ H of dist(., H) by sampling, plus the Lipschitz margin.
double hausdorff_upper(const CrackSet& h, const CrackSet& k) {
  const Mesh& m = *k.mesh();
  auto ends = [&](std::size_t e) {
    return std::pair{m.vertices()[m.edges()[e].v[0]], m.vertices()[m.edges()[e].v[1]]};
  };
  const auto hl = h.edge_list();
  double best = 0.0;
  for (std::size_t e : k.minus(h).edge_list()) {
    const auto [a, b] = ends(e);
    const double step = std::hypot(b.x - a.x, b.y - a.y) / kHausdorffSamples;
    for (int i = 0; i <= kHausdorffSamples; ++i) {
      const double s = static_cast<double>(i) / kHausdorffSamples;
      const Point2 x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t f : hl) {
        const auto [c, q] = ends(f);
        dist = std::min(dist, point_segment(x, c, q));
      }
      best = std::max(best, dist + 0.5 * step);
    }
  }
  return best;
}

void criterion_2() {
  auto mesh = structured_grid(6, 6, 1.0, 1.0, [](std::size_t, std::size_t, Point2, Point2) { return true; });
  DissipationParams p;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0, pairs = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  while (pairs < 10000) {
    const double pk = 0.1 + 0.5 * u(rng), ph = 0.2 + 0.6 * u(rng);
    CrackSet k(mesh), h(mesh);
    for (std::size_t e = 0; e < mesh->num_edges(); ++e)
      if (u(rng) < pk) {
        k.insert(e);
        if (u(rng) < ph) h.insert(e);
      }
    if (h.empty()) continue;
    ++pairs;
    const double delta = delta_integral(h, k, p).value();
    const double bound = hausdorff_upper(h, k) * h1_diff(h, k);
    const double slack = bound - delta;
    if (bound > 0.0) min_slack = std::min(min_slack, slack / bound);
    if (slack < -kQuadRel * (1.0 + delta)) ++violations;
  }
  report(2, violations == 0,
         std::to_string(pairs) + " nested pairs, " + std::to_string(violations) + " violations, min relative slack " +
             fmt(min_slack));
}

// ---------------------------------------------------------------- 3

void criterion_3() {
  auto all = [](std::size_t, std::size_t, Point2, Point2) { return true; };
  const Amplitude one = Amplitude::linear(1.0, 0.0);
  double affine_err = 0.0;
  for (std::size_t nx : {1, 4, 8, 16}) {
    auto m = structured_grid(nx, nx, 1.0, 1.0, all);
    const BoundaryLoad load{builtin_profile("linear-y", *m), one};
    affine_err = std::max(affine_err, std::abs(solve_energy(0.0, CrackSet(m), load).energy - 0.5));
  }

  auto top_bottom = [](std::size_t, std::size_t, Point2 a, Point2 b) {
    return (a.y == 0.0 && b.y == 0.0) || (a.y == 1.0 && b.y == 1.0);
  };
  auto strip = structured_grid(8, 8, 1.0, 1.0, top_bottom);
  CrackSet cut(strip);
  for (std::size_t e = 0; e < strip->num_edges(); ++e) {
    const auto& ed = strip->edges()[e];
    if (strip->vertices()[ed.v[0]].y == 0.5 && strip->vertices()[ed.v[1]].y == 0.5) cut.insert(e);
  }
  const double cut_energy = solve_energy(0.0, cut, {builtin_profile("linear-y", *strip), one}).energy;

  BoundaryLoad gen{builtin_profile("linear-x", *strip), Amplitude::linear(0.3, 1.7)};
  for (std::size_t v = 0; v < strip->num_vertices(); ++v) {
    const Point2 x = strip->vertices()[v];
    gen.profile[v] = std::sin(3 * x.x) + x.y * x.y;
  }
  std::mt19937 rng(3);
  std::bernoulli_distribution coin(0.15);
  double fd_rel = 0.0;
  for (int it = 0; it < 20; ++it) {
    CrackSet k(strip);
    for (std::size_t e = 0; e < strip->num_edges(); ++e)
      if (coin(rng)) k.insert(e);
    const double t = 0.4, step = 1e-4;
    const double fd = (solve_energy(t + step, k, gen).energy - solve_energy(t - step, k, gen).energy) / (2 * step);
    const double pw = power(t, k, gen);
    fd_rel = std::max(fd_rel, std::abs(pw - fd) / std::max(std::abs(fd), 1e-300));
  }
  report(3, affine_err <= kSolverTol && cut_energy <= kSolverTol && fd_rel <= kFdRel,
         "affine |E-0.5| " + fmt(affine_err) + ", cut E " + fmt(cut_energy) + ", power vs FD rel " + fmt(fd_rel));
}

// ---------------------------------------------------------------- 4, 7, 9

void criterion_4(const std::vector<Run>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    ok = ok && r.archive.audits.power_excess <= 0.0;
    detail += r.name + " " + fmt(r.archive.audits.power_excess) + "; ";
  }
  report(4, ok, "max |dE/dt| - C_P(E+1): " + detail);
}

void criterion_7(const std::vector<const Archive*>& all) {
  double diff = 0.0, excess = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const Archive* a : all) {
    const auto& b = a->audits.balance;
    diff = std::max(diff, b.max_form_difference);
    excess = std::max(excess, b.upper_excess);
    ok = ok && b.max_form_difference < kFormDiff && b.upper_ok;
  }
  report(7, ok,
         std::to_string(all.size()) + " runs, max form difference " + fmt(diff) +
             ", max upper-estimate excess over quadrature bound " + fmt(excess));
}

void criterion_9(const std::vector<const Archive*>& all, const Archive& nucleation) {
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const Archive* a : all) {
    violations += a->audits.components.violations;
    min_slack = std::min(min_slack, a->audits.components.slack());
  }
  const auto& nc = nucleation.audits.components;
  const bool nucleated = nc.max_components > nc.initial;
  report(9, violations == 0 && nucleated,
         std::to_string(all.size()) + " runs, " + std::to_string(violations) + " violations, min slack " +
             fmt(min_slack) + ", nucleation components " + std::to_string(nc.initial) + " -> " +
             std::to_string(nc.max_components));
}

// ---------------------------------------------------------------- 5

void criterion_5(std::vector<Run>& runs, std::vector<Archive>& extra) {
  bool ok = true;
  std::string detail;
  for (auto& r : runs) {
    const auto t0 = Clock::now();
    const Prepared prep = prepare(r.archive.config);
    const auto& steps = r.archive.evolution.steps;
    double worst = 0.0;
    bool certified = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
      const double c = step_certificate(steps[i].t, steps[i - 1].state, steps[i].state, prep.instance);
      worst = std::max(worst, c);
      certified = certified && c <= prep.instance.stab_tol(steps[i].energy);
    }
    std::string greedy = "pool > 12";
    if (prep.instance.generator.pool().size() <= 12) {
      RunConfig g = r.archive.config;
      g.greedy = true;
      Archive ga = run_config(g);
      std::size_t diverge = steps.size();
      for (std::size_t i = 0; i < steps.size() && i < ga.evolution.steps.size(); ++i)
        if (!(ga.evolution.steps[i].state == steps[i].state)) {
          diverge = i;
          break;
        }
      const bool agree = diverge == steps.size() && ga.evolution.steps.size() == steps.size();
      greedy = agree ? "greedy agrees" : "greedy diverges at step " + std::to_string(diverge);
      certified = certified && agree;
      extra.push_back(std::move(ga));
    }
    const double secs = r.seconds + seconds_since(t0);
    certified = certified && secs < kMinutes5;
    ok = ok && certified;
    detail += r.name + " (max certificate " + fmt(worst) + ", " + greedy + ", " + fmt(secs) + " s); ";
  }
  report(5, ok, detail);
}

// ---------------------------------------------------------------- 6

// Minimum over all strictly increasing chains from K- to K+ of the folded
// hop weights, by depth-first enumeration.
class ChainOracle {
 public:
  ChainOracle(double t, const CrackSet& km, const CrackSet& kp, const RisInstance& inst, HopForm form)
      : t_(t), km_(km), inst_(inst), form_(form), gap_(kp.minus(km).edge_list()) {
    const std::size_t n = std::size_t{1} << gap_.size();
    r_.assign(n, std::numeric_limits<double>::quiet_NaN());
    w_.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  }

  double best() {
    const std::size_t full = (std::size_t{1} << gap_.size()) - 1;
    best_ = std::numeric_limits<double>::infinity();
    if (full == 0) return 0.0;
    walk(0, 0.0, full);
    return best_;
  }
  std::size_t chains() const { return chains_; }

 private:
  CrackSet state(std::size_t m) const {
    CrackSet s = km_;
    for (std::size_t j = 0; j < gap_.size(); ++j)
      if (m >> j & 1U) s.insert(gap_[j]);
    return s;
  }
  double r(std::size_t m) {
    if (std::isnan(r_[m])) r_[m] = residual_stability(t_, state(m), inst_).r;
    return r_[m];
  }
  double weight(std::size_t a, std::size_t b) {
    double& w = w_[(a << gap_.size()) | b];
    if (std::isnan(w)) {
      const CrackSet sa = state(a), sb = state(b);
      const double delta = inst_.viscous ? delta_integral(sa, sb, inst_.params).value() : 0.0;
      w = hop_weight(r(a), h1_diff(sa, sb), delta, alpha(sa, sb).value(), inst_.nucleation_weight(), form_);
    }
    return w;
  }
  void walk(std::size_t m, double acc, std::size_t full) {
    if (m == full) {
      ++chains_;
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
  std::vector<double> r_, w_;
  double best_ = 0.0;
  std::size_t chains_ = 0;
};

void criterion_6(const std::vector<const Archive*>& all) {
  auto left_right = [](std::size_t, std::size_t, Point2 a, Point2 b) {
    return (a.x == 0.0 && b.x == 0.0) || (a.x == 2.0 && b.x == 2.0);
  };
  auto mesh = structured_grid(8, 4, 2.0, 1.0, left_right);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t mismatches = 0, lower_violations = 0, chains = 0;
  for (int it = 0; it < 10; ++it) {
    const BoundaryLoad load{builtin_profile("linear-x", *mesh), Amplitude::linear(0.0, 2.0 + 6.0 * u(rng))};
    auto model = std::make_shared<const EnergyModel>(mesh, load);
    std::vector<std::size_t> order(mesh->num_edges());
    for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t gap = 3 + it % 6;  // 3..8
    CrackSet km(mesh);
    for (int j = 0; j < 1 + it % 3; ++j) km.insert(order[j]);
    std::vector<std::size_t> pool(order.begin() + 3, order.begin() + 3 + gap);
    CrackSet kp = km;
    for (std::size_t e : pool) kp.insert(e);
    DissipationParams p;
    p.lambda = 0.05 + 0.4 * u(rng);
    p.mu = 0.05 + 0.4 * u(rng);
    const RisInstance inst = fem_instance(model, p, CompetitorGenerator::subsets(pool, 2));
    const double t = 0.3 + 0.7 * u(rng);
    for (HopForm form : {HopForm::Ve, HopForm::Original}) {
      JumpCostOptions opts;
      opts.form = form;
      const auto res = jump_cost(t, km, kp, inst, opts);
      ChainOracle oracle(t, km, kp, inst, form);
      if (res.cost.value() != oracle.best()) ++mismatches;
      chains += oracle.chains();
      if (res.cost.value() < (p.lambda + p.mu) * alpha(km, kp).value()) ++lower_violations;
    }
  }
  // The lower bound on every recorded jump of the viscous runs.
  std::size_t recorded = 0;
  for (const Archive* a : all) {
    if (!a->evolution.viscous) continue;
    const double w = a->config.params.lambda + a->config.params.mu;
    for (std::size_t j = 0; j < a->jumps.size() && j < a->audits.jump_conditions.size(); ++j) {
      const auto& jr = a->jumps[j];
      const auto& row = a->audits.jump_conditions[j];
      ++recorded;
      if (row.cost_left_right < w * alpha(jr.left, jr.right).value()) ++lower_violations;
    }
  }
  report(6, mismatches == 0 && lower_violations == 0,
         "10 instances, gaps 3..8, " + std::to_string(chains) + " chains enumerated, " +
             std::to_string(mismatches) + " mismatches; lower bound on " + std::to_string(recorded) +
             " recorded jumps too, " + std::to_string(lower_violations) + " violations");
}

// ---------------------------------------------------------------- 8

void criterion_8(const Archive& two_well) {
  const auto& au = two_well.audits;
  bool jumps_ok = !au.jump_conditions.empty();
  double worst = 0.0;
  for (const auto& row : au.jump_conditions) {
    jumps_ok = jumps_ok && row.ok;
    worst = std::max({worst, std::abs(row.left_at), std::abs(row.at_right), std::abs(row.left_right)});
  }
  report(8, au.stable_off_jumps && jumps_ok,
         std::to_string(two_well.evolution.steps.size()) + " samples, max R off jumps " + fmt(au.max_r_off_jumps) +
             ", " + std::to_string(au.jump_conditions.size()) + " jumps, max identity residual " + fmt(worst));
}

// ---------------------------------------------------------------- 10

void criterion_10(const Run& strip) {
  const auto t0 = Clock::now();
  if (!strip.archive.griffith) {
    report(10, false, "no tip report in the strip archive");
    return;
  }
  const auto& rep = *strip.archive.griffith;
  bool monotone = true;
  std::map<std::size_t, double> last;
  for (const auto& s : rep.samples) {
    auto it = last.find(s.tip);
    if (it != last.end() && s.sigma < it->second) monotone = false;
    last[s.tip] = s.sigma;
  }
  const KktCheck k = check_kkt(rep, kGriffithTol);
  const double secs = strip.seconds + seconds_since(t0);
  const bool a = monotone && k.min_sigmadot >= 0.0;
  const bool b = k.growing > 0 && k.max_growth_deviation <= kGriffithTol;
  const bool c = k.max_compl <= kGriffithTol;
  const bool gap = k.max_estimator_gap <= kEstimatorGap;
  report(10, a && b && c && gap && secs < kMinutes10,
         std::string("h ") + fmt(rep.h) + ", tau " + fmt(rep.tau) + "; (a) " + (a ? "ok" : "no") +
             " (b) max |kappa^2-1| " + fmt(k.max_growth_deviation) + " over " + std::to_string(k.growing) +
             " growing samples (c) max complementarity " + fmt(k.max_compl) + "; estimator gap " +
             fmt(k.max_estimator_gap) + "; " + fmt(secs) + " s");
}

// ---------------------------------------------------------------- 11

std::vector<std::pair<double, double>> read_sweep(const fs::path& dir) {
  std::vector<std::pair<double, double>> out;
  if (!dir.empty() && fs::exists(dir / "two-well.sweep")) {
    std::istringstream in(detail::read_text_file((dir / "two-well.sweep").string()));
    for (std::string line; std::getline(in, line);) {
      const auto toks = detail::split_ws(detail::strip_comment(line));
      if (toks.size() == 2) out.emplace_back(detail::parse_double(toks[0]), detail::parse_double(toks[1]));
    }
  }
  if (out.empty()) out = {{0.05, 0.05}, {0.1, 0.1}, {0.2, 0.2}};
  return out;
}

void criterion_11(const fs::path& dir, std::vector<Archive>& extra) {
  const RunConfig base = load_named(dir, "two-well");
  bool earlier = false;
  std::string detail;
  for (auto [lambda, mu] : read_sweep(dir)) {
    RunConfig c = base;
    c.params.lambda = lambda;
    c.params.mu = mu;
    c.viscous = true;
    Archive ve = run_config(c);
    c.viscous = false;
    Archive en = run_config(c);
    const std::size_t iv = first_change(ve.evolution), ie = first_change(en.evolution);
    earlier = earlier || (ie < iv && ie < en.evolution.steps.size());
    detail += "(" + fmt(lambda) + "," + fmt(mu) + "): energetic " + std::to_string(ie) + " ve " +
              std::to_string(iv) + "; ";
    extra.push_back(std::move(ve));
    extra.push_back(std::move(en));
  }
  report(11, earlier, "first change index " + detail);
}

// ---------------------------------------------------------------- 12

void criterion_12(const std::vector<Run>& runs) {
  const fs::path tmp = fs::temp_directory_path() / "vefrac-acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    RunConfig c = r.archive.config;
    const Archive again = run_config(c);
    c.threads = 4;
    Archive threaded = run_config(c);
    threaded.config.threads = r.archive.config.threads;
    const auto p1 = tmp / (r.name + "-1.json"), p2 = tmp / (r.name + "-2.json");
    save_archive(r.archive, p1.string());
    save_archive(again, p2.string());
    const bool same = detail::read_text_file(p1.string()) == detail::read_text_file(p2.string()) &&
                      archive_to_string(threaded) == archive_to_string(r.archive);
    ok = ok && same;
    detail += r.name + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(tmp);
  report(12, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path();
  try {
    criterion_1();
    criterion_2();
    criterion_3();

    std::vector<Run> runs;
    for (const auto& name : benchmark_names()) {
      const auto t0 = Clock::now();
      Run r{name, run_config(load_named(dir, name)), 0.0};
      r.seconds = seconds_since(t0);
      runs.push_back(std::move(r));
    }
    auto find = [&](const std::string& n) -> const Run& {
      return *std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.name == n; });
    };

    criterion_4(runs);
    std::vector<Archive> extra;
    criterion_5(runs, extra);
    criterion_11(dir, extra);

    std::vector<const Archive*> all;
    for (const auto& r : runs) all.push_back(&r.archive);
    for (const auto& a : extra) all.push_back(&a);

    criterion_6(all);
    criterion_7(all);
    criterion_8(find("two-well").archive);
    criterion_9(all, find("nucleation").archive);
    criterion_10(find("griffith-strip"));
    criterion_12(runs);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
