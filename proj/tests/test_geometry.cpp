#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "test_support.hpp"
#include "vefrac/error.hpp"
#include "vefrac/geometry.hpp"

using namespace vefrac;
using namespace vefrac::testing;

TEST_CASE("unit square has five edges and diameter sqrt 2") {
  auto m = unit_square();
  CHECK(m->num_edges() == 5);
  CHECK(m->diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(m->area() == doctest::Approx(1.0));
  std::size_t boundary = 0;
  for (const auto& e : m->edges()) boundary += e.tag == EdgeTag::DirichletBoundary;
  CHECK(boundary == 4);
  CHECK(m->edges()[m->find_edge(0, 2)].tag == EdgeTag::Interior);
}

TEST_CASE("marker selecting nothing is rejected") {
  auto none = [](std::size_t, std::size_t, Point2, Point2) { return false; };
  CHECK_THROWS_WITH_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, none),
                       "empty Dirichlet set", ValidationError);
}

TEST_CASE("degenerate and non-conforming input") {
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, all_boundary()), ValidationError);
  // Clockwise triangle.
  CHECK_THROWS_AS(build_mesh({{0, 0}, {0, 1}, {1, 0}}, {{0, 1, 2}}, all_boundary()), ValidationError);
  // Hanging node: vertex 4 splits the edge 1-2 of the left triangle only.
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {1, 2}, {2, 1}, {1, 1}},
                             {{0, 1, 2}, {1, 3, 4}, {4, 3, 2}}, all_boundary()),
                  ValidationError);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}, all_boundary()), ValidationError);
}

TEST_CASE("structured grid edge count matches enumeration") {
  for (std::size_t n = 1; n <= 7; ++n) {
    auto m = grid(n, n);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& t : m->triangles())
      for (int i = 0; i < 3; ++i)
        pairs.insert(std::minmax(t[i], t[(i + 1) % 3]));
    CHECK(m->num_edges() == pairs.size());
    CHECK(m->num_edges() == 3 * n * n + 2 * n);
  }
}

TEST_CASE("edges are numbered by sorted vertex pairs") {
  auto m = grid(3, 2);
  for (std::size_t e = 1; e < m->num_edges(); ++e) {
    const auto& a = m->edges()[e - 1].v;
    const auto& b = m->edges()[e].v;
    CHECK(std::make_pair(a[0], a[1]) < std::make_pair(b[0], b[1]));
  }
}

TEST_CASE("h1 measure") {
  auto m = grid(2, 2);
  CrackSet k(m);
  CHECK(h1_measure(k) == 0.0);
  k = edges_between(m, {{{0, 0}, {0.5, 0}}});
  CHECK(h1_measure(k) == 0.5);
  k = edges_between(m, {{{0, 0}, {0.5, 0}}, {{0.5, 0}, {0.5, 0.5}}, {{0, 0}, {0.5, 0.5}}});
  CHECK(h1_measure(k) == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("h1_diff against set subtraction") {
  auto m = grid(3, 2);  // 23 edges
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    auto h = random_crack(m, rng, 0.4);
    auto k = random_crack(m, rng, 0.4);
    double oracle = 0.0;
    for (std::size_t e = 0; e < m->num_edges(); ++e)
      if (k.contains(e) && !h.contains(e)) oracle += m->edges()[e].length;
    CHECK(h1_diff(h, k) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(h1_diff(k, k) == 0.0);
    CHECK(h1_diff(CrackSet(m), k) == doctest::Approx(h1_measure(k)));
    // Symmetric difference.
    double sym = 0.0;
    for (std::size_t e = 0; e < m->num_edges(); ++e)
      if (k.contains(e) != h.contains(e)) sym += m->edges()[e].length;
    CHECK(h1_diff(h, k) + h1_diff(k, h) == doctest::Approx(sym).epsilon(1e-14));
  }
}

TEST_CASE("h1_diff is additive along nested triples") {
  auto m = grid(4, 4);
  std::mt19937 rng(11);
  for (int it = 0; it < 200; ++it) {
    auto l = random_crack(m, rng, 0.5);
    auto k = random_subset(l, rng);
    auto h = random_subset(k, rng);
    CHECK(h1_diff(h, l) == doctest::Approx(h1_diff(h, k) + h1_diff(k, l)).epsilon(1e-14));
  }
}

namespace {

std::size_t bfs_components(const CrackSet& k) {
  const auto& mesh = *k.mesh();
  std::set<std::size_t> unseen;
  for (std::size_t e : k.edge_list()) unseen.insert(e);
  std::size_t count = 0;
  while (!unseen.empty()) {
    ++count;
    std::deque<std::size_t> q{*unseen.begin()};
    unseen.erase(unseen.begin());
    while (!q.empty()) {
      auto e = q.front();
      q.pop_front();
      for (auto v : mesh.edges()[e].v)
        for (auto f : mesh.vertex_edges(v))
          if (unseen.erase(f)) q.push_back(f);
    }
  }
  return count;
}

}  // namespace

TEST_CASE("connected components") {
  auto m = grid(4, 4);
  CHECK(connected_components(CrackSet(m)).empty());
  auto two = edges_between(m, {{{0, 0}, {0.25, 0}}, {{0.25, 0}, {0.5, 0}}});
  CHECK(count_components(two) == 1);
  auto path_far = edges_between(
      m, {{{0, 0}, {0.25, 0}}, {{0.25, 0}, {0.5, 0}}, {{0.75, 1}, {1, 1}}});
  CHECK(count_components(path_far) == 2);
  CHECK(bfs_components(path_far) == 2);

  std::mt19937 rng(3);
  for (int it = 0; it < 200; ++it) {
    auto k = random_crack(m, rng, 0.15);
    auto comps = connected_components(k);
    CHECK(comps.size() == bfs_components(k));
    CrackSet cover(m);
    std::size_t total = 0;
    std::size_t prev_min = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      CHECK(bfs_components(comps[i]) == 1);
      total += comps[i].size();
      cover = cover.united(comps[i]);
      auto first = comps[i].edge_list().front();
      if (i > 0) CHECK(first > prev_min);
      prev_min = first;
    }
    CHECK(total == k.size());
    CHECK(cover == k);
  }
}

TEST_CASE("distance to a crack") {
  auto m = grid(2, 2);
  CHECK(dist_point_to_crack({0.3, 0.3}, CrackSet(m)) == m->diameter());
  auto k = edges_between(m, {{{0, 0}, {0.5, 0}}, {{0.5, 0}, {1, 0}}});
  CHECK(dist_point_to_crack({0.7, 0.0}, k) == 0.0);
  CHECK(dist_point_to_crack({0.0, 1.0}, k) == 1.0);
  CHECK(dist_point_to_crack({2.0, 0.0}, k) == 1.0);
  CHECK(point_segment_distance({0, 1}, {0, 0}, {1, 0}) == 1.0);
}

TEST_CASE("hausdorff distance") {
  auto m = grid(1, 1, 1.0, 0.3);
  CrackSet empty(m);
  auto bottom = edges_between(m, {{{0, 0}, {1, 0}}});
  auto top = edges_between(m, {{{0, 0.3}, {1, 0.3}}});
  CHECK(hausdorff(empty, empty).value == 0.0);
  CHECK(hausdorff(bottom, bottom).value == 0.0);
  auto h = hausdorff(bottom, top);
  CHECK(h.resolution == doctest::Approx(0.3 / 16));
  CHECK(std::abs(h.value - 0.3) <= h.resolution);
  CHECK(hausdorff(empty, top).value == m->diameter());
}

TEST_CASE("hausdorff metric properties on random sets") {
  auto m = grid(4, 4);
  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    auto a = random_crack(m, rng, 0.2);
    auto b = random_crack(m, rng, 0.2);
    auto c = random_crack(m, rng, 0.2);
    if (a.empty() || b.empty() || c.empty()) continue;
    auto ab = hausdorff(a, b);
    CHECK(ab.value == hausdorff(b, a).value);
    CHECK(ab.value >= 0.0);
    CHECK((ab.value == 0.0) == (a == b));
    CHECK(hausdorff(a, c).value <= ab.value + hausdorff(b, c).value + 2 * ab.resolution);
  }
}

TEST_CASE("mesh text format round trip") {
  auto m = grid(3, 2);
  auto text = write_mesh(*m);
  auto back = parse_mesh(text);
  REQUIRE(back->num_edges() == m->num_edges());
  for (std::size_t e = 0; e < m->num_edges(); ++e) {
    CHECK(back->edges()[e].v == m->edges()[e].v);
    CHECK(back->edges()[e].tag == m->edges()[e].tag);
    CHECK(back->edges()[e].length == m->edges()[e].length);
  }
  CHECK(write_mesh(*back) == text);
}

TEST_CASE("mesh parser selectors and errors") {
  const std::string base = "ve-mesh 1\n# square\nv 0 0\nv 1 0\nv 1 1\nv 0 1\nt 0 1 2\nt 0 2 3\n";
  auto m = parse_mesh(base + "dirichlet box -0.1 -0.1 1.1 0.1\n");
  std::size_t dir = 0;
  for (const auto& e : m->edges()) dir += e.tag == EdgeTag::DirichletBoundary;
  CHECK(dir == 1);
  m = parse_mesh(base + "dirichlet pairs 3 2 0 3\n");
  CHECK(m->edges()[m->find_edge(2, 3)].tag == EdgeTag::DirichletBoundary);
  CHECK(m->edges()[m->find_edge(0, 3)].tag == EdgeTag::DirichletBoundary);
  CHECK(m->edges()[m->find_edge(0, 1)].tag == EdgeTag::NeumannBoundary);

  CHECK_THROWS_AS(parse_mesh("ve-mesh 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_mesh(base), ValidationError);
  CHECK_THROWS_AS(parse_mesh(base + "v 1.0x 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_mesh(base + "q 1\n"), ValidationError);
  CHECK_THROWS_AS(read_mesh_file("/nonexistent/mesh.txt"), IoError);
  // Decimal parsing is exact.
  auto m2 = parse_mesh("ve-mesh 1\nv 0 0\nv 0.1 0\nv 0 0.3\nt 0 1 2\ndirichlet box -1 -1 1 1\n");
  CHECK(m2->vertices()[1].x == 0.1);
  CHECK(m2->vertices()[2].y == 0.3);
}
