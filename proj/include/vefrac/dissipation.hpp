#pragma once

#include <compare>
#include <vector>

#include "vefrac/geometry.hpp"

namespace vefrac {

// Nonnegative real or +infinity. Infinity is a tag, not a float, so it cannot
// leak into sums by accident: value() on an infinite cost throws.
class Cost {
 public:
  Cost() = default;
  static Cost finite(double v);
  static Cost infinite() {
    Cost c;
    c.inf_ = true;
    return c;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  double value() const;
  // Finite value, or `fallback` when infinite.
  double value_or(double fallback) const { return inf_ ? fallback : v_; }

  Cost& operator+=(const Cost& o);
  friend Cost operator+(Cost a, const Cost& b) { return a += b; }
  friend Cost operator*(double s, const Cost& c);
  friend bool operator==(const Cost& a, const Cost& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend std::partial_ordering operator<=>(const Cost& a, const Cost& b);

 private:
  bool inf_ = false;
  double v_ = 0.0;
};

struct DissipationParams {
  double lambda = 1.0;
  double mu = 1.0;
  int quadrature_order = 3;
};

// Throws ValidationError unless lambda, mu > 0 and 1 <= order <= 16.
void validate(const DissipationParams& p);

// Gauss-Legendre nodes and weights on [0,1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int order);

// Number of components of K that touch no edge of H; infinite unless H is a
// subset of K.
Cost alpha(const CrackSet& h, const CrackSet& k);

// H1(K\H) + lambda * alpha(H,K).
Cost dist_d(const CrackSet& h, const CrackSet& k, const DissipationParams& p);

// Evaluates integrals of dist(., H) along single mesh edges by adaptive
// composite Gauss-Legendre of the configured order. Every Delta in the
// library goes through this class so that sums agree bit for bit.
class AtwIntegrator {
 public:
  AtwIntegrator(const CrackSet& h, int quadrature_order);
  // Integral of dist(x, H) over edge e.
  double edge_integral(std::size_t e) const;
  // Sum of edge_integral over K\H in increasing edge order.
  double integral(const CrackSet& k) const;

 private:
  double dist(Point2 x) const;
  double panel(Point2 a, Point2 b) const;
  double adapt(Point2 a, Point2 b, double whole, double tol, int depth) const;
  MeshPtr mesh_;
  CrackSet h_;
  std::vector<std::pair<Point2, Point2>> segments_;
  const QuadratureRule* rule_;
};

// The integral part of delta: Delta(H,K) = int_{K\H} dist(x,H) dH1.
Cost delta_integral(const CrackSet& h, const CrackSet& k, const DissipationParams& p);
// Delta(H,K) + mu * alpha(H,K).
Cost delta_atw(const CrackSet& h, const CrackSet& k, const DissipationParams& p);
// d + delta = H1(K\H) + Delta + (lambda + mu) * alpha.
Cost big_d(const CrackSet& h, const CrackSet& k, const DissipationParams& p);

// K_0 <= K_1 <= ... <= K_N on a common mesh.
struct MonotoneChain {
  std::vector<CrackSet> states;
  bool is_monotone() const;
};

enum class VarKind { D, Alpha, H1 };

// Sum of the chosen functional over consecutive pairs; infinite if any pair
// fails inclusion.
Cost var_along(const MonotoneChain& chain, VarKind which, const DissipationParams& p);

}  // namespace vefrac
