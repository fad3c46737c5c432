#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vefrac/elastic.hpp"
#include "vefrac/evolution.hpp"

namespace vefrac {

// Polyline along which one tip may advance, as an edge path starting at a
// vertex of the initial crack.
struct TipPath {
  std::vector<std::size_t> edges;
  std::vector<std::size_t> vertices;  // edges.size() + 1 entries
  std::vector<double> arclength;      // length of the first j edges
};

// Throws ValidationError unless the path is simple, outside K0 and starts on
// a vertex of K0.
TipPath make_tip_path(const CrackSet& k0, const std::vector<std::size_t>& edges);
// Also checks that the paths are pairwise vertex-disjoint.
std::vector<TipPath> make_tip_paths(const CrackSet& k0, const std::vector<std::vector<std::size_t>>& edges);

struct TipTrack {
  // [tip][step]
  std::vector<std::vector<std::size_t>> prefix;
  std::vector<std::vector<double>> sigma;
};

// sigma_i(t_j) = arclength of K_j on path i. Throws ValidationError when K_j
// minus K_0 is not a union of path prefixes.
TipTrack track_tips(const DiscreteEvolution& evo, const std::vector<TipPath>& paths);

struct GriffithSample {
  double t = 0.0;
  std::size_t tip = 0;
  double sigma = 0.0;
  double sigmadot = 0.0;
  double kappa2 = 0.0;  // from the annulus fit
  double g = 0.0;       // -dE/dsigma by finite differences; NaN past the path end
  double slack = 0.0;   // 1 - kappa2
  double compl_residual = 0.0;  // (1 - kappa2) * sigmadot
};

struct GriffithOptions {
  double r_in = 2.0;   // in units of the mesh size
  double r_out = 6.0;
  std::size_t g_steps = 2;
};

struct GriffithReport {
  std::vector<GriffithSample> samples;  // step-major, then tip
  std::size_t tips = 0;
  double h = 0.0;
  double tau = 0.0;
};

// sigmadot is the forward difference quotient, backward at the last sample.
GriffithReport griffith_report(const DiscreteEvolution& evo, const std::vector<TipPath>& paths,
                               const EnergyModel& model, const GriffithOptions& opts = {});

// Columns t,tip,sigma,sigmadot,kappa2,slack,compl.
std::string griffith_csv(const GriffithReport& report);

struct KktCheck {
  bool a = false;  // sigmadot >= -tol
  bool b = false;  // 1 - kappa2 >= -tol
  bool c = false;  // |(1 - kappa2) sigmadot| <= tol
  double min_sigmadot = 0.0;
  double min_slack = 0.0;
  double max_compl = 0.0;
  std::size_t growing = 0;
  double max_growth_deviation = 0.0;  // max |kappa2 - 1| over samples with sigmadot > 0
  double max_estimator_gap = 0.0;     // max |g - kappa2| / max(kappa2, 0.1) where g is finite
};

KktCheck check_kkt(const GriffithReport& report, double tol);

struct ProbeResult {
  CrackSet competitor;
  double energy_k = 0.0;   // ball energy of K
  double energy_kp = 0.0;  // ball energy of the competitor
  double h1 = 0.0;
  double delta = 0.0;  // int over K' \ K of dist(., K in the ball)
  double alpha = 0.0;
  double residual = 0.0;  // energy_kp + h1 + delta + (lambda + mu) alpha - energy_k
};

// Localized stability of K at t inside the ball. The ball is the union of
// the triangles whose centroid lies in it; outside it the field is frozen to
// the equilibrium of (t,K). Competitors must contain K and add only edges
// whose triangles all lie in the ball. Throws ValidationError when the ball
// meets the Dirichlet boundary.
std::vector<ProbeResult> local_stability_probe(double t, const CrackSet& k, Point2 center, double radius,
                                               const EnergyModel& model, const DissipationParams& params,
                                               const std::vector<CrackSet>& competitors);

}  // namespace vefrac
