#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "vefrac/geometry.hpp"

namespace vefrac {

// Scalar load amplitude a(t): either c0 + c1*t or a piecewise-linear table.
// Tabulated amplitudes have piecewise-constant derivative; at a knot rate()
// is the right derivative and rate_left() the left one.
class Amplitude {
 public:
  enum class Kind { Linear, Table };

  static Amplitude linear(double c0, double c1);
  // Knot times must be strictly increasing; at least two knots.
  static Amplitude table(std::vector<double> times, std::vector<double> values);

  Kind kind() const { return kind_; }
  double value(double t) const;
  double rate(double t) const;
  double rate_left(double t) const;
  // sup |a'| over [t0, t1]; exact for both families.
  double sup_abs_rate(double t0, double t1) const;
  // Whether the table covers [t0, t1]; always true for the linear family.
  bool covers(double t0, double t1) const;

  double c0() const { return c0_; }
  double c1() const { return c1_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t interval(double t, bool left) const;
  Kind kind_ = Kind::Linear;
  double c0_ = 0.0;
  double c1_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

// Dirichlet datum g(t) = a(t) * G, with G given as nodal values on every
// vertex (its values off the Dirichlet boundary only matter for the power).
struct BoundaryLoad {
  std::vector<double> profile;
  Amplitude amplitude;
};

// Named profiles: "linear-x", "linear-y", "constant".
std::vector<double> builtin_profile(const std::string& name, const Mesh& mesh);
// `ve-profile 1` header followed by one value per vertex.
std::vector<double> parse_profile(const std::string& text, const Mesh& mesh);
std::string write_profile(const std::vector<double>& profile);

// The cracked domain: one DOF per fan of triangles around a vertex, fans
// being separated by crack edges and by the boundary.
struct CrackedSpace {
  MeshPtr mesh;
  CrackSet crack;
  std::vector<std::array<std::size_t, 3>> tri_dofs;  // DOF of each triangle corner
  std::vector<std::size_t> dof_vertex;
  std::vector<char> dirichlet;  // per DOF
  std::vector<std::size_t> component;  // per DOF, labels in order of first DOF
  std::size_t num_components = 0;

  std::size_t num_dofs() const { return dof_vertex.size(); }
  // DOF carried by vertex v inside triangle t.
  std::size_t dof_at(std::size_t t, std::size_t v) const;
};

CrackedSpace split_along_crack(const CrackSet& k);

struct SolverOptions {
  double rel_tol = 1e-10;
  std::size_t max_iterations = 0;  // 0 picks max(1000, 10 * unknowns)
};

struct EnergySolution {
  double energy = 0.0;
  std::vector<double> u;  // per DOF
  double residual = 0.0;  // relative residual reported by CG
  std::size_t iterations = 0;
};

// Minimizes 1/2 int |grad u|^2 over the triangles with active_tri set (all
// when empty), with u fixed to `values` on DOFs where `fixed` is set. Every
// connected group of free DOFs that touches no fixed DOF gets its first DOF
// pinned to 0. Throws NumericalError if CG does not converge.
EnergySolution solve_constrained(const CrackedSpace& space, const std::vector<char>& active_tri,
                                 const std::vector<char>& fixed, const std::vector<double>& values,
                                 const SolverOptions& opts = {});

// FEM energy E(t,K) with u = a(t) G on the Dirichlet DOFs.
EnergySolution solve_energy(double t, const CrackSet& k, const BoundaryLoad& load,
                            const SolverOptions& opts = {});

// int grad(a'(t) G) . grad u over the cracked domain, evaluated as G^T A u.
double power(double t, const CrackSet& k, const BoundaryLoad& load, const SolverOptions& opts = {});

// sup_t ||grad g'(t)||_{L2} * max(area/2, 1) over [0, horizon].
double power_bound_constant(const BoundaryLoad& load, const Mesh& mesh, double horizon);

// Energy and power at unit amplitude: E = a^2 e and dE/dt = a a' p.
struct UnitEnergy {
  double e = 0.0;
  double p = 0.0;
};

UnitEnergy unit_energy(const CrackSet& k, const std::vector<double>& profile,
                       const SolverOptions& opts = {});

// Owns a load and caches unit-amplitude energies by crack set. Safe to share
// between threads; insertion is idempotent.
class EnergyModel {
 public:
  EnergyModel(MeshPtr mesh, BoundaryLoad load, SolverOptions opts = {});

  const MeshPtr& mesh() const { return mesh_; }
  const BoundaryLoad& load() const { return load_; }
  const SolverOptions& solver() const { return opts_; }

  UnitEnergy unit(const CrackSet& k) const;
  double energy(double t, const CrackSet& k) const;
  double power(double t, const CrackSet& k) const;
  // Power with the left derivative of a at t.
  double power_left(double t, const CrackSet& k) const;
  EnergySolution solve(double t, const CrackSet& k) const;
  // Fills the cache for all sets, using up to `threads` workers.
  void prefetch(const std::vector<CrackSet>& sets, unsigned threads) const;

  std::size_t cache_size() const;

 private:
  MeshPtr mesh_;
  BoundaryLoad load_;
  SolverOptions opts_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<CrackSet, UnitEnergy, CrackSetHash> cache_;
};

// G = -dE/dsigma at sigma = 0+, from the Lagrange interpolant through
// E(t, K u first j path edges), j = 0..h_steps. The path must start at a tip
// of K (a vertex with exactly one incident crack edge) and be a simple edge
// path outside K.
double energy_release(double t, const CrackSet& k, const std::vector<std::size_t>& path,
                      std::size_t h_steps, const EnergyModel& model);

struct SifFit {
  double kappa = 0.0;
  std::size_t samples = 0;
  double rms_residual = 0.0;
};

// Least-squares fit of
//   u ~ c0 + c1 x + c2 rho^1.5 sin(1.5 theta) + c3 rho^2 cos(2 theta)
//       + kappa * 2 sqrt(rho/pi) sin(theta/2)
// over DOFs with r_in <= rho <= r_out, in tip coordinates (x along
// `direction`) where the crack lies along theta = +-pi. The background terms
// are the smooth ones compatible with traction-free crack faces.
// DOFs on the crack faces take theta = +pi or -pi by the side of their fan.
// Throws ValidationError with fewer than 12 samples or when crack edges
// other than the straight branch behind the tip come within r_out.
SifFit fit_sif(const CrackedSpace& space, const std::vector<double>& u, Point2 tip,
               Point2 direction, double r_in, double r_out);

}  // namespace vefrac
