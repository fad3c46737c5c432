#include "vefrac/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "union_find.hpp"
#include "vefrac/error.hpp"

namespace vefrac {

double norm(Point2 p) { return std::hypot(p.x, p.y); }

namespace {

double signed_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

DirichletMarker box_marker(double xmin, double ymin, double xmax, double ymax) {
  const double tol = 1e-12 * std::max({1.0, std::abs(xmin), std::abs(xmax), std::abs(ymin),
                                       std::abs(ymax)});
  return [=](std::size_t, std::size_t, Point2 a, Point2 b) {
    auto inside = [&](Point2 p) {
      return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
    };
    return inside(a) && inside(b);
  };
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

std::size_t Mesh::find_edge(std::size_t a, std::size_t b) const {
  if (a >= vertices_.size() || b >= vertices_.size()) return npos;
  for (std::size_t e : vertex_edges_[a]) {
    const auto& v = edges_[e].v;
    if ((v[0] == a && v[1] == b) || (v[0] == b && v[1] == a)) return e;
  }
  return npos;
}

Point2 Mesh::edge_point(std::size_t e, double s) const {
  const Point2 a = vertices_[edges_[e].v[0]];
  const Point2 b = vertices_[edges_[e].v[1]];
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

MeshPtr build_mesh(std::vector<Point2> vertices,
                   std::vector<std::array<std::size_t, 3>> triangles,
                   const DirichletMarker& dirichlet) {
  if (vertices.empty() || triangles.empty()) throw ValidationError("mesh has no triangles");
  for (const auto& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ValidationError("non-finite vertex coordinate");
  }
  auto mesh = std::make_shared<Mesh>();
  mesh->vertices_ = std::move(vertices);
  mesh->triangles_ = std::move(triangles);
  const auto& V = mesh->vertices_;
  const auto& T = mesh->triangles_;

  // Directed half-edges detect inconsistent orientation and edges shared by
  // more than two triangles.
  std::map<std::pair<std::size_t, std::size_t>, std::array<std::size_t, 2>> edge_tris;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> directed;
  for (std::size_t t = 0; t < T.size(); ++t) {
    const auto& tri = T[t];
    for (std::size_t k = 0; k < 3; ++k) {
      if (tri[k] >= V.size()) throw ValidationError("triangle references missing vertex");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw ValidationError("degenerate triangle " + std::to_string(t));
    if (!(signed_area(V[tri[0]], V[tri[1]], V[tri[2]]) > 0.0))
      throw ValidationError("degenerate triangle " + std::to_string(t) +
                            " (area <= 0 or negative orientation)");
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t a = tri[(k + 1) % 3];
      const std::size_t b = tri[(k + 2) % 3];
      if (!directed.emplace(std::make_pair(a, b), t).second)
        throw ValidationError("non-conforming mesh: edge traversed twice in the same direction");
      auto key = std::minmax(a, b);
      auto [it, fresh] = edge_tris.try_emplace({key.first, key.second},
                                               std::array<std::size_t, 2>{t, npos});
      if (!fresh) {
        if (it->second[1] != npos)
          throw ValidationError("non-conforming mesh: edge shared by more than two triangles");
        it->second[1] = t;
      }
    }
  }

  mesh->edges_.reserve(edge_tris.size());
  for (const auto& [key, tris] : edge_tris) {
    Edge e;
    e.v = {key.first, key.second};
    e.length = norm(V[key.second] - V[key.first]);
    e.tri = tris;
    if (!(e.length > 0.0)) throw ValidationError("zero-length edge");
    mesh->edges_.push_back(e);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  for (std::size_t i = 0; i < mesh->edges_.size(); ++i)
    edge_index[{mesh->edges_[i].v[0], mesh->edges_[i].v[1]}] = i;

  mesh->tri_edges_.resize(T.size());
  mesh->vertex_tris_.assign(V.size(), {});
  mesh->vertex_edges_.assign(V.size(), {});
  for (std::size_t t = 0; t < T.size(); ++t) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto key = std::minmax(T[t][(k + 1) % 3], T[t][(k + 2) % 3]);
      mesh->tri_edges_[t][k] = edge_index.at({key.first, key.second});
      mesh->vertex_tris_[T[t][k]].push_back(t);
    }
  }
  for (std::size_t e = 0; e < mesh->edges_.size(); ++e) {
    mesh->vertex_edges_[mesh->edges_[e].v[0]].push_back(e);
    mesh->vertex_edges_[mesh->edges_[e].v[1]].push_back(e);
  }
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (mesh->vertex_tris_[v].empty())
      throw ValidationError("vertex " + std::to_string(v) + " belongs to no triangle");
  }

  // Hanging nodes show up as a vertex lying inside a boundary edge.
  std::size_t n_dirichlet = 0;
  for (auto& e : mesh->edges_) {
    if (e.tri[1] != npos) continue;
    const Point2 a = V[e.v[0]];
    const Point2 b = V[e.v[1]];
    for (std::size_t v = 0; v < V.size(); ++v) {
      if (v == e.v[0] || v == e.v[1]) continue;
      const Point2 d = b - a;
      const double s = ((V[v].x - a.x) * d.x + (V[v].y - a.y) * d.y) / (e.length * e.length);
      if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
      if (point_segment_distance(V[v], a, b) <= 1e-12 * e.length)
        throw ValidationError("non-conforming mesh: hanging node " + std::to_string(v));
    }
    if (dirichlet && dirichlet(e.v[0], e.v[1], a, b)) {
      e.tag = EdgeTag::DirichletBoundary;
      ++n_dirichlet;
    } else {
      e.tag = EdgeTag::NeumannBoundary;
    }
  }
  if (n_dirichlet == 0) throw ValidationError("empty Dirichlet set");

  double area = 0.0;
  for (std::size_t t = 0; t < T.size(); ++t) area += mesh->triangle_area(t);
  mesh->area_ = area;

  // The domain is a union of triangles, so its extreme points are vertices.
  double diam = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = i + 1; j < V.size(); ++j) diam = std::max(diam, norm(V[i] - V[j]));
  mesh->diameter_ = diam;

  std::vector<double> lengths;
  lengths.reserve(mesh->edges_.size());
  for (const auto& e : mesh->edges_) lengths.push_back(e.length);
  std::sort(lengths.begin(), lengths.end());
  mesh->min_edge_ = lengths.front();
  mesh->h_ = lengths[lengths.size() / 2];
  return mesh;
}

MeshPtr structured_grid(std::size_t nx, std::size_t ny, double lx, double ly,
                        const DirichletMarker& dirichlet,
                        const std::function<bool(std::size_t, std::size_t)>& keep, double x0,
                        double y0) {
  if (nx == 0 || ny == 0) throw ValidationError("grid needs at least one cell");
  std::vector<Point2> pts;
  std::vector<std::size_t> id((nx + 1) * (ny + 1), npos);
  auto vid = [&](std::size_t i, std::size_t j) -> std::size_t {
    std::size_t& slot = id[j * (nx + 1) + i];
    if (slot == npos) {
      slot = pts.size();
      pts.push_back({x0 + lx * static_cast<double>(i) / static_cast<double>(nx),
                     y0 + ly * static_cast<double>(j) / static_cast<double>(ny)});
    }
    return slot;
  };
  // Pre-assign vertex ids row by row so numbering does not depend on `keep`
  // traversal quirks.
  std::vector<bool> used((nx + 1) * (ny + 1), false);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      if (keep && !keep(i, j)) continue;
      used[j * (nx + 1) + i] = used[j * (nx + 1) + i + 1] = true;
      used[(j + 1) * (nx + 1) + i] = used[(j + 1) * (nx + 1) + i + 1] = true;
    }
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i)
      if (used[j * (nx + 1) + i]) vid(i, j);

  std::vector<std::array<std::size_t, 3>> tris;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      if (keep && !keep(i, j)) continue;
      const std::size_t a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1),
                        d = vid(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  return build_mesh(std::move(pts), std::move(tris), dirichlet);
}

// ---------------------------------------------------------------------------
// CrackSet

CrackSet::CrackSet(MeshPtr mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw ValidationError("crack set needs a mesh");
  words_.assign((mesh_->num_edges() + 63) / 64, 0);
}

CrackSet::CrackSet(MeshPtr mesh, std::span<const std::size_t> edges) : CrackSet(std::move(mesh)) {
  for (std::size_t e : edges) insert(e);
}

void CrackSet::check_edge(std::size_t e) const {
  if (!mesh_ || e >= mesh_->num_edges())
    throw ValidationError("edge index " + std::to_string(e) + " out of range");
}

void CrackSet::insert(std::size_t e) {
  check_edge(e);
  words_[e >> 6] |= std::uint64_t{1} << (e & 63);
}

void CrackSet::erase(std::size_t e) {
  check_edge(e);
  words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63));
}

std::size_t CrackSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> CrackSet::edge_list() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + static_cast<std::size_t>(b));
      bits &= bits - 1;
    }
  }
  return out;
}

void require_same_mesh(const CrackSet& a, const CrackSet& b) {
  if (!a.mesh() || a.mesh() != b.mesh())
    throw ValidationError("crack sets live on different meshes");
}

bool CrackSet::subset_of(const CrackSet& other) const {
  require_same_mesh(*this, other);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] & ~other.words_[w]) return false;
  return true;
}

CrackSet CrackSet::united(const CrackSet& other) const {
  require_same_mesh(*this, other);
  CrackSet out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] |= other.words_[w];
  return out;
}

CrackSet CrackSet::minus(const CrackSet& other) const {
  require_same_mesh(*this, other);
  CrackSet out = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= ~other.words_[w];
  return out;
}

std::size_t CrackSet::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (auto w : words_) {
    h ^= static_cast<std::size_t>(w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
  return h;
}

bool canonical_less(const CrackSet& a, const CrackSet& b) {
  const std::size_t na = a.size(), nb = b.size();
  if (na != nb) return na < nb;
  const auto la = a.edge_list();
  const auto lb = b.edge_list();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

// ---------------------------------------------------------------------------
// Measures and topology

double h1_measure(const CrackSet& k) {
  double sum = 0.0;
  for (std::size_t e : k.edge_list()) sum += k.mesh()->edges()[e].length;
  return sum;
}

double h1_diff(const CrackSet& h, const CrackSet& k) { return h1_measure(k.minus(h)); }

std::vector<CrackSet> connected_components(const CrackSet& k) {
  const auto edges = k.edge_list();
  if (edges.empty()) return {};
  const auto& mesh = *k.mesh();
  detail::UnionFind uf(edges.size());
  std::map<std::size_t, std::size_t> first_at_vertex;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t v : mesh.edges()[edges[i]].v) {
      auto [it, fresh] = first_at_vertex.try_emplace(v, i);
      if (!fresh) uf.unite(it->second, i);
    }
  }
  // edges are sorted, so first occurrence of a root is its smallest edge
  std::map<std::size_t, std::size_t> label;
  std::vector<CrackSet> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::size_t r = uf.find(i);
    auto [it, fresh] = label.try_emplace(r, out.size());
    if (fresh) out.emplace_back(k.mesh());
    out[it->second].insert(edges[i]);
  }
  return out;
}

std::size_t count_components(const CrackSet& k) { return connected_components(k).size(); }

double point_segment_distance(Point2 x, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  double s = len2 > 0.0 ? ((x.x - a.x) * d.x + (x.y - a.y) * d.y) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return norm(x - (a + s * d));
}

double dist_point_to_crack(Point2 x, const CrackSet& k) {
  const auto& mesh = *k.mesh();
  const auto edges = k.edge_list();
  if (edges.empty()) return mesh.diameter();
  double best = INFINITY;
  for (std::size_t e : edges) {
    const auto& ed = mesh.edges()[e];
    best = std::min(best, point_segment_distance(x, mesh.vertices()[ed.v[0]],
                                                 mesh.vertices()[ed.v[1]]));
  }
  return best;
}

namespace {

double directed_sup(const CrackSet& from, const CrackSet& to, double res) {
  const auto& mesh = *from.mesh();
  double sup = 0.0;  // sup over the empty set
  for (std::size_t e : from.edge_list()) {
    const double len = mesh.edges()[e].length;
    const auto n = static_cast<std::size_t>(std::ceil(len / res));
    for (std::size_t i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n);
      sup = std::max(sup, dist_point_to_crack(mesh.edge_point(e, s), to));
    }
  }
  return sup;
}

}  // namespace

HausdorffValue hausdorff(const CrackSet& h, const CrackSet& k, double resolution) {
  require_same_mesh(h, k);
  const double res = resolution > 0.0 ? resolution : h.mesh()->min_edge_length() / 16.0;
  return {std::max(directed_sup(h, k, res), directed_sup(k, h, res)), res};
}

}  // namespace vefrac
