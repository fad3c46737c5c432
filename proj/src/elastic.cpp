#include "vefrac/elastic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/QR>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "text_util.hpp"
#include "union_find.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

// ---------------------------------------------------------------- amplitude

Amplitude Amplitude::linear(double c0, double c1) {
  if (!std::isfinite(c0) || !std::isfinite(c1)) throw ValidationError("non-finite amplitude");
  Amplitude a;
  a.kind_ = Kind::Linear;
  a.c0_ = c0;
  a.c1_ = c1;
  return a;
}

Amplitude Amplitude::table(std::vector<double> times, std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw ValidationError("amplitude table needs at least two (t, a) rows");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw ValidationError("non-finite amplitude table entry");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("amplitude table times must be strictly increasing");
  }
  Amplitude a;
  a.kind_ = Kind::Table;
  a.times_ = std::move(times);
  a.values_ = std::move(values);
  return a;
}

// Index i of the interval [t_i, t_{i+1}] used at t. With `left`, a knot
// belongs to the interval on its left.
std::size_t Amplitude::interval(double t, bool left) const {
  const std::size_t last = times_.size() - 2;
  if (t <= times_.front()) return 0;
  if (t >= times_.back()) return last;
  auto it = left ? std::lower_bound(times_.begin(), times_.end(), t)
                 : std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(i, last);
}

double Amplitude::value(double t) const {
  if (kind_ == Kind::Linear) return c0_ + c1_ * t;
  const std::size_t i = interval(t, false);
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const double s = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return values_[i] + s * (values_[i + 1] - values_[i]);
}

double Amplitude::rate(double t) const {
  if (kind_ == Kind::Linear) return c1_;
  const std::size_t i = interval(t, false);
  return (values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i]);
}

double Amplitude::rate_left(double t) const {
  if (kind_ == Kind::Linear) return c1_;
  const std::size_t i = interval(t, true);
  return (values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i]);
}

double Amplitude::sup_abs_rate(double t0, double t1) const {
  if (kind_ == Kind::Linear) return std::abs(c1_);
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (times_[i + 1] <= t0 && i + 2 < times_.size()) continue;
    if (times_[i] >= t1 && i > 0) continue;
    best = std::max(best, std::abs((values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i])));
  }
  return best;
}

bool Amplitude::covers(double t0, double t1) const {
  if (kind_ == Kind::Linear) return true;
  return times_.front() <= t0 && times_.back() >= t1;
}

// ----------------------------------------------------------------- profiles

std::vector<double> builtin_profile(const std::string& name, const Mesh& mesh) {
  std::vector<double> g(mesh.num_vertices());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Point2 p = mesh.vertices()[v];
    if (name == "linear-x")
      g[v] = p.x;
    else if (name == "linear-y")
      g[v] = p.y;
    else if (name == "constant")
      g[v] = 1.0;
    else
      throw ValidationError("unknown builtin profile '" + name + "'");
  }
  return g;
}

std::vector<double> parse_profile(const std::string& text, const Mesh& mesh) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> tok;
  while (std::getline(in, line))
    for (auto& t : detail::split_ws(detail::strip_comment(line))) tok.push_back(std::move(t));
  if (tok.size() < 2 || tok[0] != "ve-profile" || tok[1] != "1")
    throw ValidationError("expected header 've-profile 1'");
  std::vector<double> g;
  for (std::size_t i = 2; i < tok.size(); ++i) g.push_back(detail::parse_double(tok[i]));
  if (g.size() != mesh.num_vertices())
    throw ValidationError("profile has " + std::to_string(g.size()) + " values, mesh has " +
                          std::to_string(mesh.num_vertices()) + " vertices");
  return g;
}

std::string write_profile(const std::vector<double>& profile) {
  std::string out = "ve-profile 1\n";
  for (double v : profile) out += detail::format_double(v) + "\n";
  return out;
}

// ------------------------------------------------------------ cracked space

std::size_t CrackedSpace::dof_at(std::size_t t, std::size_t v) const {
  const auto& tri = mesh->triangles()[t];
  for (std::size_t k = 0; k < 3; ++k)
    if (tri[k] == v) return tri_dofs[t][k];
  throw ValidationError("vertex does not belong to triangle");
}

namespace {

std::size_t local_index(const std::array<std::size_t, 3>& tri, std::size_t v) {
  for (std::size_t k = 0; k < 3; ++k)
    if (tri[k] == v) return k;
  return npos;
}

}  // namespace

CrackedSpace split_along_crack(const CrackSet& k) {
  if (!k.mesh()) throw ValidationError("crack set without mesh");
  const Mesh& mesh = *k.mesh();
  const auto& tris = mesh.triangles();
  CrackedSpace s;
  s.mesh = k.mesh();
  s.crack = k;

  // Corners (t, local k) of the same vertex are glued across uncracked
  // interior edges.
  detail::UnionFind corners(3 * tris.size());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges()[e];
    if (ed.tri[1] == npos || k.contains(e)) continue;
    for (std::size_t v : ed.v)
      corners.unite(3 * ed.tri[0] + local_index(tris[ed.tri[0]], v),
                    3 * ed.tri[1] + local_index(tris[ed.tri[1]], v));
  }

  std::vector<std::size_t> root_dof(3 * tris.size(), npos);
  s.tri_dofs.assign(tris.size(), {npos, npos, npos});
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    for (std::size_t t : mesh.vertex_triangles(v)) {
      const std::size_t lk = local_index(tris[t], v);
      const std::size_t r = corners.find(3 * t + lk);
      if (root_dof[r] == npos) {
        root_dof[r] = s.dof_vertex.size();
        s.dof_vertex.push_back(v);
      }
      s.tri_dofs[t][lk] = root_dof[r];
    }
  }

  s.dirichlet.assign(s.num_dofs(), 0);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges()[e];
    if (ed.tag != EdgeTag::DirichletBoundary || k.contains(e)) continue;
    for (std::size_t v : ed.v) s.dirichlet[s.dof_at(ed.tri[0], v)] = 1;
  }

  detail::UnionFind comps(s.num_dofs());
  for (const auto& td : s.tri_dofs) {
    comps.unite(td[0], td[1]);
    comps.unite(td[1], td[2]);
  }
  std::vector<std::size_t> label(s.num_dofs(), npos);
  s.component.resize(s.num_dofs());
  for (std::size_t d = 0; d < s.num_dofs(); ++d) {
    const std::size_t r = comps.find(d);
    if (label[r] == npos) label[r] = s.num_components++;
    s.component[d] = label[r];
  }
  return s;
}

// ----------------------------------------------------------------- assembly

namespace {

using Local = std::array<std::array<double, 3>, 3>;

// Gradient coefficients: grad phi_k = (b_k, c_k) / (2 area).
struct Shape {
  std::array<double, 3> b, c;
  double area;
};

Shape shape(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  Shape s;
  s.area = mesh.triangle_area(t);
  for (std::size_t k = 0; k < 3; ++k) {
    const Point2 q1 = mesh.vertices()[tri[(k + 1) % 3]];
    const Point2 q2 = mesh.vertices()[tri[(k + 2) % 3]];
    s.b[k] = q1.y - q2.y;
    s.c[k] = q2.x - q1.x;
  }
  return s;
}

Local local_stiffness(const Mesh& mesh, std::size_t t) {
  const Shape s = shape(mesh, t);
  Local m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = (s.b[i] * s.b[j] + s.c[i] * s.c[j]) / (4.0 * s.area);
  return m;
}

// int grad x . grad y over one triangle, from nodal values. The gradient form
// keeps constants exactly in the kernel.
double local_form(const Shape& s, const std::array<double, 3>& x, const std::array<double, 3>& y) {
  const double xb = s.b[0] * x[0] + s.b[1] * x[1] + s.b[2] * x[2];
  const double xc = s.c[0] * x[0] + s.c[1] * x[1] + s.c[2] * x[2];
  const double yb = s.b[0] * y[0] + s.b[1] * y[1] + s.b[2] * y[2];
  const double yc = s.c[0] * y[0] + s.c[1] * y[1] + s.c[2] * y[2];
  return (xb * yb + xc * yc) / (4.0 * s.area);
}

double bilinear(const CrackedSpace& s, const std::vector<char>& active,
                const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t t = 0; t < s.tri_dofs.size(); ++t) {
    if (!active.empty() && !active[t]) continue;
    const auto& d = s.tri_dofs[t];
    sum += local_form(shape(*s.mesh, t), {x[d[0]], x[d[1]], x[d[2]]}, {y[d[0]], y[d[1]], y[d[2]]});
  }
  return sum;
}

std::vector<double> nodal_on_dofs(const CrackedSpace& s, const std::vector<double>& g, double scale) {
  std::vector<double> out(s.num_dofs());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = scale * g[s.dof_vertex[d]];
  return out;
}

void check_profile(const std::vector<double>& g, const Mesh& mesh) {
  if (g.size() != mesh.num_vertices())
    throw ValidationError("load profile size does not match the mesh");
}

}  // namespace

EnergySolution solve_constrained(const CrackedSpace& space, const std::vector<char>& active_tri,
                                 const std::vector<char>& fixed, const std::vector<double>& values,
                                 const SolverOptions& opts) {
  const std::size_t n = space.num_dofs();
  const std::size_t nt = space.tri_dofs.size();
  if (fixed.size() != n || values.size() != n) throw ValidationError("constraint size mismatch");
  if (!active_tri.empty() && active_tri.size() != nt) throw ValidationError("triangle mask size mismatch");
  auto active = [&](std::size_t t) { return active_tri.empty() || active_tri[t]; };

  std::vector<char> touched(n, 0);
  detail::UnionFind groups(n);
  for (std::size_t t = 0; t < nt; ++t) {
    if (!active(t)) continue;
    const auto& d = space.tri_dofs[t];
    for (std::size_t k = 0; k < 3; ++k) touched[d[k]] = 1;
    groups.unite(d[0], d[1]);
    groups.unite(d[1], d[2]);
  }
  std::vector<char> anchored(n, 0);
  for (std::size_t d = 0; d < n; ++d)
    if (touched[d] && fixed[d]) anchored[groups.find(d)] = 1;

  std::vector<double> u(n, 0.0);
  std::vector<std::size_t> index(n, npos);
  std::size_t unknowns = 0;
  for (std::size_t d = 0; d < n; ++d) {
    if (fixed[d]) {
      u[d] = values[d];
      continue;
    }
    if (!touched[d]) continue;
    const std::size_t r = groups.find(d);
    if (!anchored[r]) {
      anchored[r] = 1;  // pinned at 0
      continue;
    }
    index[d] = unknowns++;
  }

  EnergySolution sol;
  if (unknowns > 0) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * nt);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
    for (std::size_t t = 0; t < nt; ++t) {
      if (!active(t)) continue;
      const Local m = local_stiffness(*space.mesh, t);
      const auto& d = space.tri_dofs[t];
      for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t gi = index[d[i]];
        if (gi == npos) continue;
        for (std::size_t j = 0; j < 3; ++j) {
          const std::size_t gj = index[d[j]];
          if (gj == npos)
            rhs[static_cast<Eigen::Index>(gi)] -= m[i][j] * u[d[j]];
          else
            trip.emplace_back(static_cast<int>(gi), static_cast<int>(gj), m[i][j]);
        }
      }
    }
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(unknowns),
                                  static_cast<Eigen::Index>(unknowns));
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(opts.rel_tol);
    cg.setMaxIterations(static_cast<Eigen::Index>(
        opts.max_iterations ? opts.max_iterations : std::max<std::size_t>(1000, 10 * unknowns)));
    cg.compute(a);
    const Eigen::VectorXd x = cg.solve(rhs);
    sol.residual = cg.error();
    sol.iterations = static_cast<std::size_t>(cg.iterations());
    if (cg.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "conjugate gradient did not converge: relative residual " << sol.residual << " after "
          << sol.iterations << " iterations";
      throw NumericalError(msg.str());
    }
    for (std::size_t d = 0; d < n; ++d)
      if (index[d] != npos) u[d] = x[static_cast<Eigen::Index>(index[d])];
  }
  sol.energy = 0.5 * bilinear(space, active_tri, u, u);
  sol.u = std::move(u);
  return sol;
}

EnergySolution solve_energy(double t, const CrackSet& k, const BoundaryLoad& load,
                            const SolverOptions& opts) {
  check_profile(load.profile, *k.mesh());
  const CrackedSpace s = split_along_crack(k);
  return solve_constrained(s, {}, s.dirichlet, nodal_on_dofs(s, load.profile, load.amplitude.value(t)),
                           opts);
}

double power(double t, const CrackSet& k, const BoundaryLoad& load, const SolverOptions& opts) {
  check_profile(load.profile, *k.mesh());
  const CrackedSpace s = split_along_crack(k);
  const auto sol = solve_constrained(
      s, {}, s.dirichlet, nodal_on_dofs(s, load.profile, load.amplitude.value(t)), opts);
  return load.amplitude.rate(t) * bilinear(s, {}, nodal_on_dofs(s, load.profile, 1.0), sol.u);
}

double power_bound_constant(const BoundaryLoad& load, const Mesh& mesh, double horizon) {
  check_profile(load.profile, mesh);
  double grad2 = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const std::array<double, 3> g{load.profile[tri[0]], load.profile[tri[1]], load.profile[tri[2]]};
    grad2 += local_form(shape(mesh, t), g, g);
  }
  return load.amplitude.sup_abs_rate(0.0, horizon) * std::sqrt(std::max(grad2, 0.0)) *
         std::max(0.5 * mesh.area(), 1.0);
}

UnitEnergy unit_energy(const CrackSet& k, const std::vector<double>& profile, const SolverOptions& opts) {
  check_profile(profile, *k.mesh());
  const CrackedSpace s = split_along_crack(k);
  const auto g = nodal_on_dofs(s, profile, 1.0);
  const auto sol = solve_constrained(s, {}, s.dirichlet, g, opts);
  return {sol.energy, bilinear(s, {}, g, sol.u)};
}

// ------------------------------------------------------------- energy model

EnergyModel::EnergyModel(MeshPtr mesh, BoundaryLoad load, SolverOptions opts)
    : mesh_(std::move(mesh)), load_(std::move(load)), opts_(opts) {
  check_profile(load_.profile, *mesh_);
}

UnitEnergy EnergyModel::unit(const CrackSet& k) const {
  if (k.mesh() != mesh_) throw ValidationError("crack set belongs to a different mesh");
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  const UnitEnergy v = unit_energy(k, load_.profile, opts_);
  std::lock_guard lock(mutex_);
  return cache_.try_emplace(k, v).first->second;
}

double EnergyModel::energy(double t, const CrackSet& k) const {
  const double a = load_.amplitude.value(t);
  return a * a * unit(k).e;
}

double EnergyModel::power(double t, const CrackSet& k) const {
  const double a = load_.amplitude.value(t);
  const double rate = load_.amplitude.rate(t);
  if (a == 0.0 || rate == 0.0) return 0.0;
  return a * rate * unit(k).p;
}

double EnergyModel::power_left(double t, const CrackSet& k) const {
  const double a = load_.amplitude.value(t);
  const double rate = load_.amplitude.rate_left(t);
  if (a == 0.0 || rate == 0.0) return 0.0;
  return a * rate * unit(k).p;
}

EnergySolution EnergyModel::solve(double t, const CrackSet& k) const {
  return solve_energy(t, k, load_, opts_);
}

void EnergyModel::prefetch(const std::vector<CrackSet>& sets, unsigned threads) const {
  std::vector<const CrackSet*> todo;
  {
    std::lock_guard lock(mutex_);
    for (const auto& k : sets)
      if (!cache_.count(k)) todo.push_back(&k);
  }
  if (todo.empty()) return;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(todo.size())));
  if (threads == 1) {
    for (const auto* k : todo) unit(*k);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < todo.size(); i += threads) unit(*todo[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::size_t EnergyModel::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

// ---------------------------------------------------------- energy release

double energy_release(double t, const CrackSet& k, const std::vector<std::size_t>& path,
                      std::size_t h_steps, const EnergyModel& model) {
  const Mesh& mesh = *k.mesh();
  if (h_steps < 1) throw ValidationError("energy_release needs at least one step");
  if (path.size() < h_steps) throw ValidationError("extension path shorter than the step count");
  auto crack_degree = [&](std::size_t v) {
    std::size_t n = 0;
    for (std::size_t e : mesh.vertex_edges(v)) n += k.contains(e);
    return n;
  };
  // Walk the path from the tip, checking it is simple and outside K.
  std::size_t tip = npos;
  for (std::size_t v : mesh.edges().at(path[0]).v)
    if (crack_degree(v) == 1) tip = v;
  if (tip == npos) throw ValidationError("extension path not incident to a crack tip");
  std::vector<double> sigma{0.0};
  std::vector<double> energy{model.energy(t, k)};
  CrackSet grown = k;
  std::vector<char> visited(mesh.num_vertices(), 0);
  visited[tip] = 1;
  std::size_t at = tip;
  for (std::size_t j = 0; j < h_steps; ++j) {
    const Edge& ed = mesh.edges().at(path[j]);
    if (k.contains(path[j])) throw ValidationError("extension path runs inside the crack");
    if (ed.v[0] != at && ed.v[1] != at) throw ValidationError("extension path is not connected");
    at = ed.v[0] == at ? ed.v[1] : ed.v[0];
    if (visited[at]) throw ValidationError("extension path is not simple");
    visited[at] = 1;
    grown.insert(path[j]);
    sigma.push_back(sigma.back() + ed.length);
    energy.push_back(model.energy(t, grown));
  }
  // Derivative at sigma_0 of the Lagrange interpolant.
  double slope = 0.0;
  const std::size_t m = sigma.size();
  for (std::size_t j = 0; j < m; ++j) {
    double w;
    if (j == 0) {
      w = 0.0;
      for (std::size_t q = 1; q < m; ++q) w += 1.0 / (sigma[0] - sigma[q]);
    } else {
      double num = 1.0, den = 1.0;
      for (std::size_t q = 0; q < m; ++q) {
        if (q == j) continue;
        if (q != 0) num *= sigma[0] - sigma[q];
        den *= sigma[j] - sigma[q];
      }
      w = num / den;
    }
    slope += w * energy[j];
  }
  return -slope;
}

// ------------------------------------------------------------------ SIF fit

SifFit fit_sif(const CrackedSpace& space, const std::vector<double>& u, Point2 tip,
               Point2 direction, double r_in, double r_out) {
  const Mesh& mesh = *space.mesh;
  if (u.size() != space.num_dofs()) throw ValidationError("field size does not match the space");
  if (!(r_in >= 0.0) || !(r_out > r_in)) throw ValidationError("invalid annulus radii");
  const double len = norm(direction);
  if (!(len > 0.0)) throw ValidationError("zero tip direction");
  const Point2 dir = (1.0 / len) * direction;
  const Point2 nrm{-dir.y, dir.x};
  auto local = [&](Point2 p) {
    const Point2 r = p - tip;
    return Point2{r.x * dir.x + r.y * dir.y, r.x * nrm.x + r.y * nrm.y};
  };
  const double eps = 1e-9 * r_out;

  for (std::size_t e : space.crack.edge_list()) {
    const Edge& ed = mesh.edges()[e];
    const Point2 a = mesh.vertices()[ed.v[0]];
    const Point2 b = mesh.vertices()[ed.v[1]];
    if (point_segment_distance(tip, a, b) > r_out) continue;
    for (Point2 p : {local(a), local(b)})
      if (std::abs(p.y) > eps || p.x > eps)
        throw ValidationError("annulus meets another crack branch");
  }

  // Fan side for DOFs lying on the crack line behind the tip.
  std::vector<Point2> fan_sum(space.num_dofs(), Point2{});
  std::vector<double> fan_count(space.num_dofs(), 0.0);
  for (std::size_t t = 0; t < space.tri_dofs.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point2 c = (1.0 / 3.0) * (mesh.vertices()[tri[0]] + mesh.vertices()[tri[1]] +
                                    mesh.vertices()[tri[2]]);
    for (std::size_t d : space.tri_dofs[t]) {
      fan_sum[d] = fan_sum[d] + c;
      fan_count[d] += 1.0;
    }
  }

  std::vector<std::array<double, 5>> rows;
  std::vector<double> rhs;
  for (std::size_t d = 0; d < space.num_dofs(); ++d) {
    const Point2 p = local(mesh.vertices()[space.dof_vertex[d]]);
    const double rho = norm(p);
    if (rho < r_in || rho > r_out) continue;
    double theta = std::atan2(p.y, p.x);
    if (std::abs(p.y) <= 1e-9 * rho && p.x < 0.0) {
      const double side = local((1.0 / fan_count[d]) * fan_sum[d]).y;
      theta = side >= 0.0 ? std::numbers::pi : -std::numbers::pi;
    }
    rows.push_back({1.0, p.x, std::pow(rho, 1.5) * std::sin(1.5 * theta),
                    rho * rho * std::cos(2.0 * theta),
                    2.0 * std::sqrt(rho / std::numbers::pi) * std::sin(0.5 * theta)});
    rhs.push_back(u[d]);
  }
  if (rows.size() < 12)
    throw ValidationError("too few DOFs in the annulus (" + std::to_string(rows.size()) + ")");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 5);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 5; ++j) a(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    b[static_cast<Eigen::Index>(i)] = rhs[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  SifFit fit;
  fit.kappa = x[4];
  fit.samples = rows.size();
  fit.rms_residual = std::sqrt((a * x - b).squaredNorm() / static_cast<double>(rows.size()));
  return fit;
}

}  // namespace vefrac
