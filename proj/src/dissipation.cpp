#include "vefrac/dissipation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "vefrac/error.hpp"

namespace vefrac {

Cost Cost::finite(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw NumericalError("cost must be finite and nonnegative");
  Cost c;
  c.v_ = v;
  return c;
}

double Cost::value() const {
  if (inf_) throw NumericalError("value() of an infinite cost");
  return v_;
}

Cost& Cost::operator+=(const Cost& o) {
  if (inf_ || o.inf_) {
    inf_ = true;
    v_ = 0.0;
  } else {
    v_ += o.v_;
  }
  return *this;
}

Cost operator*(double s, const Cost& c) {
  if (s < 0.0) throw NumericalError("negative cost scaling");
  if (c.inf_) return s == 0.0 ? Cost{} : c;
  return Cost::finite(s * c.v_);
}

std::partial_ordering operator<=>(const Cost& a, const Cost& b) {
  if (a.inf_ && b.inf_) return std::partial_ordering::equivalent;
  if (a.inf_) return std::partial_ordering::greater;
  if (b.inf_) return std::partial_ordering::less;
  return a.v_ <=> b.v_;
}

void validate(const DissipationParams& p) {
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw ValidationError("lambda must be positive");
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw ValidationError("mu must be positive");
  if (p.quadrature_order < 1 || p.quadrature_order > 16)
    throw ValidationError("quadrature order must be between 1 and 16");
}

namespace {

QuadratureRule make_rule(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map from [-1,1] to [0,1]; store in increasing order.
    r.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  static const std::array<QuadratureRule, 17> rules = [] {
    std::array<QuadratureRule, 17> out;
    for (int n = 1; n <= 16; ++n) out[n] = make_rule(n);
    return out;
  }();
  if (order < 1 || order > 16) throw ValidationError("quadrature order must be between 1 and 16");
  return rules[order];
}

Cost alpha(const CrackSet& h, const CrackSet& k) {
  require_same_mesh(h, k);
  if (!h.subset_of(k)) return Cost::infinite();
  std::size_t count = 0;
  for (const auto& comp : connected_components(k)) {
    bool touches = false;
    for (std::size_t e : comp.edge_list())
      if (h.contains(e)) {
        touches = true;
        break;
      }
    if (!touches) ++count;
  }
  return Cost::finite(static_cast<double>(count));
}

Cost dist_d(const CrackSet& h, const CrackSet& k, const DissipationParams& p) {
  const Cost a = alpha(h, k);
  if (a.is_infinite()) return a;
  return Cost::finite(h1_diff(h, k)) + p.lambda * a;
}

AtwIntegrator::AtwIntegrator(const CrackSet& h, int quadrature_order)
    : mesh_(h.mesh()), h_(h), rule_(&gauss_legendre(quadrature_order)) {
  for (std::size_t e : h.edge_list()) {
    const auto& ed = mesh_->edges()[e];
    segments_.emplace_back(mesh_->vertices()[ed.v[0]], mesh_->vertices()[ed.v[1]]);
  }
}

double AtwIntegrator::dist(Point2 x) const {
  if (segments_.empty()) return mesh_->diameter();
  double best = INFINITY;
  for (const auto& [a, b] : segments_) best = std::min(best, point_segment_distance(x, a, b));
  return best;
}

double AtwIntegrator::panel(Point2 a, Point2 b) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule_->nodes.size(); ++q)
    sum += rule_->weights[q] * dist(a + rule_->nodes[q] * (b - a));
  return sum * norm(b - a);
}

// dist(., H) has kinks where the nearest segment changes, so a single Gauss
// panel can be off by a percent. Panels are bisected until two levels agree.
double AtwIntegrator::adapt(Point2 a, Point2 b, double whole, double tol, int depth) const {
  const Point2 m = 0.5 * (a + b);
  const double left = panel(a, m);
  const double right = panel(m, b);
  if (depth == 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adapt(a, m, left, 0.5 * tol, depth - 1) + adapt(m, b, right, 0.5 * tol, depth - 1);
}

double AtwIntegrator::edge_integral(std::size_t e) const {
  if (h_.contains(e)) return 0.0;
  const auto& ed = mesh_->edges()[e];
  const Point2 a = mesh_->vertices()[ed.v[0]];
  const Point2 b = mesh_->vertices()[ed.v[1]];
  const double tol = 1e-9 * ed.length * mesh_->diameter();
  return adapt(a, b, panel(a, b), tol, 24);
}

double AtwIntegrator::integral(const CrackSet& k) const {
  double sum = 0.0;
  for (std::size_t e : k.minus(h_).edge_list()) sum += edge_integral(e);
  return sum;
}

Cost delta_integral(const CrackSet& h, const CrackSet& k, const DissipationParams& p) {
  require_same_mesh(h, k);
  if (!h.subset_of(k)) return Cost::infinite();
  return Cost::finite(AtwIntegrator(h, p.quadrature_order).integral(k));
}

Cost delta_atw(const CrackSet& h, const CrackSet& k, const DissipationParams& p) {
  const Cost a = alpha(h, k);
  if (a.is_infinite()) return a;
  return delta_integral(h, k, p) + p.mu * a;
}

Cost big_d(const CrackSet& h, const CrackSet& k, const DissipationParams& p) {
  const Cost a = alpha(h, k);
  if (a.is_infinite()) return a;
  return Cost::finite(h1_diff(h, k)) + delta_integral(h, k, p) + (p.lambda + p.mu) * a;
}

bool MonotoneChain::is_monotone() const {
  for (std::size_t i = 1; i < states.size(); ++i) {
    require_same_mesh(states[i - 1], states[i]);
    if (!states[i - 1].subset_of(states[i])) return false;
  }
  return true;
}

Cost var_along(const MonotoneChain& chain, VarKind which, const DissipationParams& p) {
  Cost total;
  for (std::size_t i = 1; i < chain.states.size(); ++i) {
    const auto& a = chain.states[i - 1];
    const auto& b = chain.states[i];
    switch (which) {
      case VarKind::D:
        total += dist_d(a, b, p);
        break;
      case VarKind::Alpha:
        total += alpha(a, b);
        break;
      case VarKind::H1: {
        require_same_mesh(a, b);
        total += a.subset_of(b) ? Cost::finite(h1_diff(a, b)) : Cost::infinite();
        break;
      }
    }
  }
  return total;
}

}  // namespace vefrac
