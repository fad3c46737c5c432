#include "vefrac/griffith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "text_util.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

using detail::format_double;

namespace {

std::size_t crack_degree(const CrackSet& k, std::size_t v) {
  std::size_t n = 0;
  for (std::size_t e : k.mesh()->vertex_edges(v)) n += k.contains(e);
  return n;
}

std::size_t other_end(const Edge& e, std::size_t v) { return e.v[0] == v ? e.v[1] : e.v[0]; }

}  // namespace

TipPath make_tip_path(const CrackSet& k0, const std::vector<std::size_t>& edges) {
  const Mesh& mesh = *k0.mesh();
  if (edges.empty()) throw ValidationError("tip path is empty");
  for (std::size_t e : edges) {
    if (e >= mesh.num_edges()) throw ValidationError("tip path edge " + std::to_string(e) + " out of range");
    if (k0.contains(e)) throw ValidationError("tip path edge " + std::to_string(e) + " lies in the initial crack");
  }
  std::size_t start = npos;
  for (std::size_t v : mesh.edges()[edges[0]].v)
    if (crack_degree(k0, v) > 0) start = v;
  if (start == npos) throw ValidationError("tip path does not start on the initial crack");
  TipPath p;
  p.edges = edges;
  p.vertices.push_back(start);
  p.arclength.push_back(0.0);
  std::vector<char> seen(mesh.num_vertices(), 0);
  seen[start] = 1;
  for (std::size_t e : edges) {
    const Edge& ed = mesh.edges()[e];
    const std::size_t at = p.vertices.back();
    if (ed.v[0] != at && ed.v[1] != at) throw ValidationError("tip path is not connected");
    const std::size_t next = other_end(ed, at);
    if (seen[next]) throw ValidationError("tip path is not simple");
    seen[next] = 1;
    p.vertices.push_back(next);
    p.arclength.push_back(p.arclength.back() + ed.length);
  }
  return p;
}

std::vector<TipPath> make_tip_paths(const CrackSet& k0, const std::vector<std::vector<std::size_t>>& edges) {
  std::vector<TipPath> out;
  std::vector<char> used(k0.mesh()->num_vertices(), 0);
  for (const auto& e : edges) {
    out.push_back(make_tip_path(k0, e));
    for (std::size_t v : out.back().vertices) {
      if (used[v]) throw ValidationError("tip paths are not disjoint");
      used[v] = 1;
    }
  }
  return out;
}

TipTrack track_tips(const DiscreteEvolution& evo, const std::vector<TipPath>& paths) {
  TipTrack tr;
  tr.prefix.assign(paths.size(), {});
  tr.sigma.assign(paths.size(), {});
  if (evo.steps.empty()) return tr;
  const CrackSet& k0 = evo.steps.front().state;
  for (std::size_t j = 0; j < evo.steps.size(); ++j) {
    const CrackSet& k = evo.steps[j].state;
    if (!k0.subset_of(k)) throw ValidationError("evolution does not contain the initial crack");
    CrackSet covered = k0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const auto& pe = paths[i].edges;
      std::size_t n = 0;
      while (n < pe.size() && k.contains(pe[n])) covered.insert(pe[n++]);
      for (std::size_t q = n; q < pe.size(); ++q)
        if (k.contains(pe[q]))
          throw ValidationError("growth on path " + std::to_string(i) + " is not a prefix at t = " +
                                format_double(evo.steps[j].t));
      tr.prefix[i].push_back(n);
      tr.sigma[i].push_back(paths[i].arclength[n]);
    }
    if (!(covered == k))
      throw ValidationError("growth off the declared paths at t = " + format_double(evo.steps[j].t));
  }
  return tr;
}

GriffithReport griffith_report(const DiscreteEvolution& evo, const std::vector<TipPath>& paths,
                               const EnergyModel& model, const GriffithOptions& opts) {
  GriffithReport rep;
  rep.tips = paths.size();
  rep.tau = evo.partition.tau();
  const Mesh& mesh = *model.mesh();
  rep.h = mesh.characteristic_size();
  const TipTrack tr = track_tips(evo, paths);
  const auto& ts = evo.partition.times();
  const std::size_t n = evo.steps.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = evo.steps[j];
    const EnergySolution sol = model.solve(s.t, s.state);
    const CrackedSpace space = split_along_crack(s.state);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const TipPath& p = paths[i];
      const std::size_t pre = tr.prefix[i][j];
      GriffithSample g;
      g.t = s.t;
      g.tip = i;
      g.sigma = tr.sigma[i][j];
      if (n == 1) {
        g.sigmadot = 0.0;
      } else if (j + 1 < n) {
        g.sigmadot = (tr.sigma[i][j + 1] - g.sigma) / (ts[j + 1] - ts[j]);
      } else {
        g.sigmadot = (g.sigma - tr.sigma[i][j - 1]) / (ts[j] - ts[j - 1]);
      }

      const std::size_t tip = p.vertices[pre];
      if (crack_degree(s.state, tip) != 1)
        throw ValidationError("tip " + std::to_string(i) + " is not a crack end point");
      std::size_t behind = npos;
      for (std::size_t e : mesh.vertex_edges(tip))
        if (s.state.contains(e)) behind = e;
      const Point2 at = mesh.vertices()[tip];
      const Point2 dir = at - mesh.vertices()[other_end(mesh.edges()[behind], tip)];
      const SifFit fit = fit_sif(space, sol.u, at, (1.0 / norm(dir)) * dir, opts.r_in * rep.h, opts.r_out * rep.h);
      g.kappa2 = fit.kappa * fit.kappa;

      const std::size_t left = p.edges.size() - pre;
      const std::size_t steps = std::min(opts.g_steps, left);
      if (steps == 0) {
        g.g = std::numeric_limits<double>::quiet_NaN();
      } else {
        std::vector<std::size_t> ext(p.edges.begin() + static_cast<std::ptrdiff_t>(pre), p.edges.end());
        g.g = energy_release(s.t, s.state, ext, steps, model);
      }
      g.slack = 1.0 - g.kappa2;
      g.compl_residual = g.slack * g.sigmadot;
      rep.samples.push_back(g);
    }
  }
  return rep;
}

std::string griffith_csv(const GriffithReport& report) {
  std::ostringstream os;
  os << "t,tip,sigma,sigmadot,kappa2,slack,compl\n";
  for (const auto& s : report.samples)
    os << format_double(s.t) << ',' << s.tip << ',' << format_double(s.sigma) << ',' << format_double(s.sigmadot)
       << ',' << format_double(s.kappa2) << ',' << format_double(s.slack) << ','
       << format_double(s.compl_residual) << '\n';
  return os.str();
}

KktCheck check_kkt(const GriffithReport& report, double tol) {
  KktCheck c;
  c.min_sigmadot = std::numeric_limits<double>::infinity();
  c.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& s : report.samples) {
    c.min_sigmadot = std::min(c.min_sigmadot, s.sigmadot);
    c.min_slack = std::min(c.min_slack, s.slack);
    c.max_compl = std::max(c.max_compl, std::abs(s.compl_residual));
    if (s.sigmadot > 0.0) {
      ++c.growing;
      c.max_growth_deviation = std::max(c.max_growth_deviation, std::abs(s.kappa2 - 1.0));
    }
    if (std::isfinite(s.g))
      c.max_estimator_gap = std::max(c.max_estimator_gap, std::abs(s.g - s.kappa2) / std::max(s.kappa2, 0.1));
  }
  if (report.samples.empty()) c.min_sigmadot = c.min_slack = 0.0;
  c.a = c.min_sigmadot >= -tol;
  c.b = c.min_slack >= -tol;
  c.c = c.max_compl <= tol;
  return c;
}

std::vector<ProbeResult> local_stability_probe(double t, const CrackSet& k, Point2 center, double radius,
                                               const EnergyModel& model, const DissipationParams& params,
                                               const std::vector<CrackSet>& competitors) {
  validate(params);
  if (k.mesh() != model.mesh()) throw ValidationError("crack and energy model live on different meshes");
  if (!(radius > 0.0)) throw ValidationError("probe radius must be positive");
  const Mesh& mesh = *k.mesh();

  std::vector<char> active(mesh.num_triangles(), 0);
  bool any = false;
  for (std::size_t tr = 0; tr < mesh.num_triangles(); ++tr) {
    const auto& tv = mesh.triangles()[tr];
    const Point2 c = (1.0 / 3.0) * (mesh.vertices()[tv[0]] + mesh.vertices()[tv[1]] + mesh.vertices()[tv[2]]);
    if (norm(c - center) < radius) active[tr] = any = 1;
  }
  if (!any) throw ValidationError("probe ball contains no triangle");
  std::vector<char> dirichlet_vertex(mesh.num_vertices(), 0);
  for (const Edge& e : mesh.edges()) {
    if (e.tag != EdgeTag::DirichletBoundary) continue;
    if (point_segment_distance(center, mesh.vertices()[e.v[0]], mesh.vertices()[e.v[1]]) < radius)
      throw ValidationError("probe ball meets the Dirichlet boundary");
    dirichlet_vertex[e.v[0]] = dirichlet_vertex[e.v[1]] = 1;
  }
  for (std::size_t tr = 0; tr < mesh.num_triangles(); ++tr)
    if (active[tr])
      for (std::size_t v : mesh.triangles()[tr])
        if (dirichlet_vertex[v]) throw ValidationError("probe ball meets the Dirichlet boundary");

  auto touches_ball = [&](std::size_t e) {
    const Edge& ed = mesh.edges()[e];
    return active[ed.tri[0]] || (ed.tri[1] != npos && active[ed.tri[1]]);
  };
  auto inside_ball = [&](std::size_t e) {
    const Edge& ed = mesh.edges()[e];
    return active[ed.tri[0]] && (ed.tri[1] == npos || active[ed.tri[1]]);
  };
  CrackSet k_ball(k.mesh());
  for (std::size_t e : k.edge_list())
    if (touches_ball(e)) k_ball.insert(e);

  const CrackedSpace base = split_along_crack(k);
  const EnergySolution global = model.solve(t, k);

  auto ball_energy = [&](const CrackedSpace& space) {
    std::vector<char> fixed(space.num_dofs(), 0);
    std::vector<double> values(space.num_dofs(), 0.0);
    for (std::size_t tr = 0; tr < mesh.num_triangles(); ++tr) {
      if (active[tr]) continue;
      for (std::size_t v : mesh.triangles()[tr]) {
        const std::size_t d = space.dof_at(tr, v);
        fixed[d] = 1;
        values[d] = global.u[base.dof_at(tr, v)];
      }
    }
    return solve_constrained(space, active, fixed, values, model.solver()).energy;
  };

  const double e_k = ball_energy(base);
  const AtwIntegrator atw(k_ball, params.quadrature_order);
  std::vector<ProbeResult> out;
  for (const CrackSet& kp : competitors) {
    require_same_mesh(k, kp);
    if (!k.subset_of(kp)) throw ValidationError("probe competitor does not contain the crack");
    const CrackSet added = kp.minus(k);
    for (std::size_t e : added.edge_list())
      if (!inside_ball(e)) throw ValidationError("probe competitor edge " + std::to_string(e) + " leaves the ball");
    ProbeResult r;
    r.competitor = kp;
    r.energy_k = e_k;
    r.energy_kp = added.empty() ? e_k : ball_energy(split_along_crack(kp));
    r.h1 = h1_measure(added);
    const CrackSet local = k_ball.united(added);
    r.delta = atw.integral(local);
    r.alpha = alpha(k_ball, local).value();
    r.residual = r.energy_kp + r.h1 + r.delta + (params.lambda + params.mu) * r.alpha - r.energy_k;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vefrac
