#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "text_util.hpp"
#include "vefrac/error.hpp"
#include "vefrac/geometry.hpp"

namespace vefrac {

namespace {

struct Box {
  double xmin, ymin, xmax, ymax;
};

}  // namespace

// Format:
//   ve-mesh 1
//   v <x> <y>
//   t <i> <j> <k>
//   dirichlet box <xmin> <ymin> <xmax> <ymax>
//   dirichlet pairs <i> <j> [<i> <j> ...]
// Blank lines and '#' comments are ignored; indices are 0-based.
MeshPtr parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<Point2> verts;
  std::vector<std::array<std::size_t, 3>> tris;
  std::vector<Box> boxes;
  std::set<std::pair<std::size_t, std::size_t>> pairs;

  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(detail::strip_comment(line));
    if (tok.empty()) continue;
    auto where = [&] { return "mesh line " + std::to_string(lineno) + ": "; };
    if (!header) {
      if (tok.size() != 2 || tok[0] != "ve-mesh")
        throw ValidationError(where() + "expected header 've-mesh 1'");
      if (tok[1] != "1") throw ValidationError(where() + "unsupported mesh version " + tok[1]);
      header = true;
      continue;
    }
    try {
      if (tok[0] == "v") {
        if (tok.size() != 3) throw ValidationError("'v' takes two coordinates");
        verts.push_back({detail::parse_double(tok[1]), detail::parse_double(tok[2])});
      } else if (tok[0] == "t") {
        if (tok.size() != 4) throw ValidationError("'t' takes three vertex indices");
        tris.push_back({detail::parse_index(tok[1]), detail::parse_index(tok[2]),
                        detail::parse_index(tok[3])});
      } else if (tok[0] == "dirichlet") {
        if (tok.size() < 2) throw ValidationError("'dirichlet' needs a selector");
        if (tok[1] == "box") {
          if (tok.size() != 6) throw ValidationError("'dirichlet box' takes four numbers");
          boxes.push_back({detail::parse_double(tok[2]), detail::parse_double(tok[3]),
                           detail::parse_double(tok[4]), detail::parse_double(tok[5])});
        } else if (tok[1] == "pairs") {
          if (tok.size() < 4 || tok.size() % 2 != 0)
            throw ValidationError("'dirichlet pairs' takes an even number of indices");
          for (std::size_t i = 2; i < tok.size(); i += 2) {
            const std::size_t a = detail::parse_index(tok[i]);
            const std::size_t b = detail::parse_index(tok[i + 1]);
            pairs.insert({std::min(a, b), std::max(a, b)});
          }
        } else {
          throw ValidationError("unknown dirichlet selector '" + tok[1] + "'");
        }
      } else {
        throw ValidationError("unknown record '" + tok[0] + "'");
      }
    } catch (const ValidationError& e) {
      throw ValidationError(where() + e.what());
    }
  }
  if (!header) throw ValidationError("empty mesh file");

  std::vector<DirichletMarker> boxm;
  for (const auto& b : boxes) boxm.push_back(box_marker(b.xmin, b.ymin, b.xmax, b.ymax));
  DirichletMarker marker = [boxm, pairs](std::size_t a, std::size_t b, Point2 pa, Point2 pb) {
    if (pairs.count({std::min(a, b), std::max(a, b)})) return true;
    for (const auto& m : boxm)
      if (m(a, b, pa, pb)) return true;
    return false;
  };
  return build_mesh(std::move(verts), std::move(tris), marker);
}

MeshPtr read_mesh_file(const std::string& path) {
  return parse_mesh(detail::read_text_file(path));
}

std::string write_mesh(const Mesh& mesh) {
  std::string out = "ve-mesh 1\n";
  for (const auto& p : mesh.vertices())
    out += "v " + detail::format_double(p.x) + " " + detail::format_double(p.y) + "\n";
  for (const auto& t : mesh.triangles())
    out += "t " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) +
           "\n";
  std::string pairs;
  std::size_t count = 0;
  for (const auto& e : mesh.edges()) {
    if (e.tag != EdgeTag::DirichletBoundary) continue;
    if (count % 8 == 0) {
      if (!pairs.empty()) pairs += "\n";
      pairs += "dirichlet pairs";
    }
    pairs += " " + std::to_string(e.v[0]) + " " + std::to_string(e.v[1]);
    ++count;
  }
  out += pairs + "\n";
  return out;
}

}  // namespace vefrac
