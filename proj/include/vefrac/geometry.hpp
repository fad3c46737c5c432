#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vefrac {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
double norm(Point2 p);

enum class EdgeTag : std::uint8_t { Interior, DirichletBoundary, NeumannBoundary };

struct Edge {
  std::array<std::size_t, 2> v;  // v[0] < v[1]
  double length = 0.0;
  EdgeTag tag = EdgeTag::Interior;
  // One or two triangles; tri[1] == npos on the boundary.
  std::array<std::size_t, 2> tri;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Decides which boundary edges carry the Dirichlet condition, given the edge's
// vertex indices and positions.
using DirichletMarker = std::function<bool(std::size_t a, std::size_t b, Point2 pa, Point2 pb)>;

// Selects boundary edges with both endpoints inside the closed box.
DirichletMarker box_marker(double xmin, double ymin, double xmax, double ymax);

// Triangulated polygonal domain. Immutable after construction; share it via
// std::shared_ptr<const Mesh> so crack sets can refer to it.
class Mesh {
 public:
  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Edge indices of triangle t, opposite to local vertex 0, 1, 2.
  const std::array<std::size_t, 3>& triangle_edges(std::size_t t) const { return tri_edges_[t]; }
  const std::vector<std::size_t>& vertex_edges(std::size_t v) const { return vertex_edges_[v]; }
  const std::vector<std::size_t>& vertex_triangles(std::size_t v) const { return vertex_tris_[v]; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  double diameter() const { return diameter_; }
  double area() const { return area_; }
  double min_edge_length() const { return min_edge_; }
  // Median edge length; used as the mesh size h.
  double characteristic_size() const { return h_; }
  double triangle_area(std::size_t t) const;

  // Edge index joining vertices a and b, or npos.
  std::size_t find_edge(std::size_t a, std::size_t b) const;
  Point2 edge_point(std::size_t e, double s) const;  // s in [0,1]

  bool is_boundary_edge(std::size_t e) const { return edges_[e].tri[1] == npos; }

 private:
  friend std::shared_ptr<const Mesh> build_mesh(std::vector<Point2>,
                                                std::vector<std::array<std::size_t, 3>>,
                                                const DirichletMarker&);
  std::vector<Point2> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<std::size_t, 3>> tri_edges_;
  std::vector<std::vector<std::size_t>> vertex_edges_;
  std::vector<std::vector<std::size_t>> vertex_tris_;
  double diameter_ = 0.0;
  double area_ = 0.0;
  double min_edge_ = 0.0;
  double h_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh>;

// Validates and indexes a triangulation. Edges are numbered by sorted vertex
// pairs in lexicographic order. Throws ValidationError on degenerate or
// non-conforming input, or when the marker selects no boundary edge.
MeshPtr build_mesh(std::vector<Point2> vertices,
                   std::vector<std::array<std::size_t, 3>> triangles,
                   const DirichletMarker& dirichlet);

// Reads the `ve-mesh 1` text format.
MeshPtr parse_mesh(const std::string& text);
MeshPtr read_mesh_file(const std::string& path);
std::string write_mesh(const Mesh& mesh);

// Structured nx-by-ny grid on [x0,x0+lx]x[y0,y0+ly], each cell split along
// its "/" diagonal. Cells for which `keep(i,j)` is false are dropped.
MeshPtr structured_grid(std::size_t nx, std::size_t ny, double lx, double ly,
                        const DirichletMarker& dirichlet,
                        const std::function<bool(std::size_t, std::size_t)>& keep = {},
                        double x0 = 0.0, double y0 = 0.0);

// A set of mesh edges standing for a compact crack.
class CrackSet {
 public:
  CrackSet() = default;
  explicit CrackSet(MeshPtr mesh);
  CrackSet(MeshPtr mesh, std::span<const std::size_t> edges);

  const MeshPtr& mesh() const { return mesh_; }
  bool contains(std::size_t e) const { return (words_[e >> 6] >> (e & 63)) & 1U; }
  void insert(std::size_t e);
  void erase(std::size_t e);
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<std::size_t> edge_list() const;

  bool subset_of(const CrackSet& other) const;
  CrackSet united(const CrackSet& other) const;
  CrackSet minus(const CrackSet& other) const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::size_t hash() const;

  friend bool operator==(const CrackSet& a, const CrackSet& b) {
    return a.mesh_ == b.mesh_ && a.words_ == b.words_;
  }

 private:
  void check_edge(std::size_t e) const;
  MeshPtr mesh_;
  std::vector<std::uint64_t> words_;
};

// Throws ValidationError when the two sets live on different meshes.
void require_same_mesh(const CrackSet& a, const CrackSet& b);

// Deterministic order: fewer edges first, then lexicographic on the sorted
// edge lists.
bool canonical_less(const CrackSet& a, const CrackSet& b);

struct CrackSetHash {
  std::size_t operator()(const CrackSet& k) const { return k.hash(); }
};

double h1_measure(const CrackSet& k);
// Length of K \ H.
double h1_diff(const CrackSet& h, const CrackSet& k);

// Maximal vertex-connected groups of edges, ordered by smallest edge index.
std::vector<CrackSet> connected_components(const CrackSet& k);
std::size_t count_components(const CrackSet& k);

double point_segment_distance(Point2 x, Point2 a, Point2 b);
// Exact distance to the union of the crack's segments; the domain diameter
// when K is empty.
double dist_point_to_crack(Point2 x, const CrackSet& k);

struct HausdorffValue {
  double value = 0.0;
  double resolution = 0.0;  // sampling step; value is accurate to +-resolution
};

// Hausdorff distance by sampling every segment at `resolution` (<= 0 picks
// min edge length / 16) plus exact endpoints.
HausdorffValue hausdorff(const CrackSet& h, const CrackSet& k, double resolution = 0.0);

}  // namespace vefrac
