#include <algorithm>
#include <cmath>
#include <filesystem>

#include "text_util.hpp"
#include "vefrac/cli_io.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

namespace {

std::size_t vertex_at(const Mesh& m, Point2 p) {
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if (norm(m.vertices()[v] - p) < 1e-12) return v;
  throw ValidationError("benchmark: no vertex at the requested point");
}

std::size_t edge_at(const Mesh& m, Point2 a, Point2 b) {
  const std::size_t e = m.find_edge(vertex_at(m, a), vertex_at(m, b));
  if (e == npos) throw ValidationError("benchmark: no edge at the requested points");
  return e;
}

DirichletMarker sides(bool vertical) {
  // vertical: x = min/max sides, otherwise y = min/max.
  return [vertical](std::size_t, std::size_t, Point2 a, Point2 b) {
    const double u = vertical ? a.x : a.y, w = vertical ? b.x : b.y;
    return u == w && (u == 0.0 || u == (vertical ? 2.0 : 1.0));
  };
}

RunConfig base(MeshPtr mesh, const std::string& name) {
  RunConfig c;
  c.mesh = std::move(mesh);
  c.mesh_source = name + ".mesh";
  c.profile_source = name + ".profile";
  c.output = name + "-out";
  return c;
}

// Strip [0,2]x[0,1], h = 1/32, Dirichlet top and bottom with the mode III
// datum a(t) (2y - 1) exp(-2x); an initial crack along y = 1/2 from the left
// edge to x = 1/2 that may grow to the right.
RunConfig griffith_strip() {
  const std::size_t nx = 64, ny = 32;
  auto c = base(structured_grid(nx, ny, 2.0, 1.0, sides(false)), "griffith-strip");
  const Mesh& m = *c.mesh;
  c.profile.resize(m.num_vertices());
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const Point2 p = m.vertices()[v];
    c.profile[v] = (2.0 * p.y - 1.0) * std::exp(-2.0 * p.x);
  }
  c.amplitude = Amplitude::linear(0.0, 0.96);
  const double h = 2.0 / static_cast<double>(nx);
  std::vector<std::size_t> path;
  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t e = edge_at(m, {h * static_cast<double>(i), 0.5}, {h * static_cast<double>(i + 1), 0.5});
    if (i < nx / 4) c.initial.push_back(e);
    else path.push_back(e);
  }
  c.params.lambda = 1.0;
  c.params.mu = 1.0;
  c.horizon = 4.0;
  c.steps = 100;
  c.pool = PoolKind::Paths;
  c.paths = {path};
  c.tip_paths = {path};
  c.budget = 3;
  return c;
}

// Rectangle [0,2]x[0,1] pulled apart by u = a(t) x on the short sides. The
// initial crack is one edge on the bottom face; the only other well is one
// edge on the top face, far from it.
RunConfig two_well() {
  auto c = base(structured_grid(8, 4, 2.0, 1.0, sides(true)), "two-well");
  const Mesh& m = *c.mesh;
  c.profile = builtin_profile("linear-x", m);
  c.amplitude = Amplitude::linear(0.0, 8.0);
  c.initial = {edge_at(m, {0.5, 0.0}, {0.5, 0.25})};
  c.pool = PoolKind::Seeds;
  c.seeds = {edge_at(m, {1.5, 1.0}, {1.5, 0.75})};
  c.budget = 1;
  c.params.lambda = 0.1;
  c.params.mu = 0.1;
  c.horizon = 1.0;
  c.steps = 50;
  c.refine_points = {0.55, 0.8};
  c.refine_levels = 2;
  return c;
}

// Same loading on a finer rectangle with six single-edge seeds on the free
// faces, each able to nucleate a new component.
RunConfig nucleation() {
  auto c = base(structured_grid(16, 8, 2.0, 1.0, sides(true)), "nucleation");
  const Mesh& m = *c.mesh;
  c.profile = builtin_profile("linear-x", m);
  c.amplitude = Amplitude::linear(0.0, 12.0);
  c.initial = {edge_at(m, {0.25, 0.0}, {0.25, 0.125})};
  for (double x : {0.75, 1.25, 1.75}) {
    c.seeds.push_back(edge_at(m, {x, 0.0}, {x, 0.125}));
    c.seeds.push_back(edge_at(m, {x, 1.0}, {x, 0.875}));
  }
  std::sort(c.seeds.begin(), c.seeds.end());
  c.pool = PoolKind::Seeds;
  c.budget = 2;
  c.params.lambda = 0.05;
  c.params.mu = 0.05;
  c.horizon = 1.0;
  c.steps = 50;
  return c;
}

// Regular hexagon around a centre vertex: 7 vertices, 6 triangles, 12 edges.
RunConfig hexagon_fan() {
  std::vector<Point2> v{{0.0, 0.0}};
  std::vector<std::array<std::size_t, 3>> tris;
  for (int i = 0; i < 6; ++i) {
    const double a = M_PI / 3.0 * i;
    v.push_back({std::cos(a), std::sin(a)});
  }
  for (std::size_t i = 1; i <= 6; ++i) tris.push_back({0, i, i % 6 + 1});
  // Dirichlet on two opposite rim edges; the rim vertices at 120 and 300
  // degrees stay free, so a single spoke can already open a crack.
  auto marker = [](std::size_t, std::size_t, Point2 a, Point2 b) {
    return (a.x > 0.1 && b.x > 0.1 && a.y > -0.1 && b.y > -0.1) ||
           (a.x < -0.1 && b.x < -0.1 && a.y < 0.1 && b.y < 0.1);
  };
  auto c = base(build_mesh(std::move(v), std::move(tris), marker), "hexagon-fan");
  c.profile = builtin_profile("linear-x", *c.mesh);
  c.amplitude = Amplitude::linear(0.0, 4.0);
  c.initial = {c.mesh->find_edge(0, 1)};
  c.pool = PoolKind::AllInterior;
  c.budget = 2;
  c.params.lambda = 0.2;
  c.params.mu = 0.2;
  c.horizon = 1.0;
  c.steps = 20;
  return c;
}

// Unit square, u = y on the whole boundary: E = 1/2 for every crack-free run.
RunConfig affine_square() {
  auto c = base(structured_grid(4, 4, 1.0, 1.0, [](std::size_t, std::size_t, Point2, Point2) { return true; }),
                "affine-square");
  c.profile = builtin_profile("linear-y", *c.mesh);
  c.amplitude = Amplitude::linear(1.0, 0.0);
  c.pool = PoolKind::AllInterior;
  c.budget = 1;
  c.horizon = 1.0;
  c.steps = 10;
  return c;
}

}  // namespace

std::vector<std::string> benchmark_names() {
  return {"griffith-strip", "two-well", "nucleation", "hexagon-fan", "affine-square"};
}

RunConfig benchmark_config(const std::string& name) {
  if (name == "griffith-strip") return griffith_strip();
  if (name == "two-well") return two_well();
  if (name == "nucleation") return nucleation();
  if (name == "hexagon-fan") return hexagon_fan();
  if (name == "affine-square") return affine_square();
  throw ValidationError("unknown benchmark '" + name + "'");
}

void write_benchmark(const std::string& name, const std::string& dir) {
  const RunConfig c = benchmark_config(name);
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  detail::write_text_file((d / (name + ".mesh")).string(), write_mesh(*c.mesh));
  detail::write_text_file((d / (name + ".profile")).string(), write_profile(c.profile));
  detail::write_text_file((d / (name + ".ini")).string(), write_config(c, name + ".mesh", name + ".profile"));
}

}  // namespace vefrac
