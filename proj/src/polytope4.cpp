#include "slice4d/polytope4.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace slice4d {
namespace {

constexpr double kGeomTol = 1e-9;

void require_positive(double edge_length) {
  if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
    throw std::invalid_argument("edge length must be positive and finite");
  }
}

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Triangle sorted(Triangle t) {
  std::sort(t.begin(), t.end());
  return t;
}

std::array<Edge, 3> sides(const Triangle& t) {
  return {make_edge(t[0], t[1]), make_edge(t[1], t[2]), make_edge(t[2], t[0])};
}

// face -> the (two) cells listing it, in cell order.
std::vector<std::vector<int>> cells_of_faces(const Polytope4& p) {
  std::vector<std::vector<int>> out(p.faces.size());
  for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) {
    for (int f : p.cells[c]) {
      if (f >= 0 && f < static_cast<int>(out.size())) out[f].push_back(c);
    }
  }
  return out;
}

void fill_face_to_cells(Polytope4& p) {
  const auto incidence = cells_of_faces(p);
  p.face_to_cells.clear();
  for (const auto& cells : incidence) {
    if (cells.size() != 2) throw std::logic_error("builder produced a face not in two cells");
    p.face_to_cells.push_back({cells[0], cells[1]});
  }
}

std::set<int> cell_vertices(const Polytope4& p, int cell) {
  std::set<int> verts;
  for (int f : p.cells[cell]) verts.insert(p.faces[f].begin(), p.faces[f].end());
  return verts;
}

struct Hyperplane {
  Vec4d normal;  // unit
  double offset = 0.0;
  bool ok = false;
};

// Best-fit hyperplane through a point set; `ok` requires the set to span
// exactly three dimensions.
Hyperplane fit_hyperplane(const std::vector<Vec4d>& pts) {
  Hyperplane h;
  if (pts.size() < 4) return h;
  Vec4d centroid = Vec4d::Zero();
  for (const auto& q : pts) centroid += q;
  centroid /= static_cast<double>(pts.size());
  Eigen::MatrixXd diffs(pts.size(), 4);
  for (std::size_t i = 0; i < pts.size(); ++i) diffs.row(i) = (pts[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), 1.0);
  if (sv(2) <= kGeomTol * scale || sv(3) > kGeomTol * scale) return h;
  h.normal = svd.matrixV().col(3);
  h.offset = h.normal.dot(centroid);
  h.ok = true;
  return h;
}

}  // namespace

int Polytope4::face_group_count() const {
  if (face_group.empty()) return 0;
  return *std::max_element(face_group.begin(), face_group.end()) + 1;
}

bool ValidationReport::has_failure(std::string_view check) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const CheckResult& r) { return r.name == check; });
}

Polytope4 make_pentachoron(double edge_length) {
  require_positive(edge_length);
  const double s = edge_length / 2.0;
  const double r3 = std::sqrt(3.0);
  const double r6 = std::sqrt(6.0);
  const double r10 = std::sqrt(10.0);

  Polytope4 p;
  p.name = "pentachoron";
  p.vertices = {
      s * Vec4d(-1.0, -1.0 / r3, -1.0 / r6, -1.0 / r10),
      s * Vec4d(1.0, -1.0 / r3, -1.0 / r6, -1.0 / r10),
      s * Vec4d(0.0, 2.0 / r3, -1.0 / r6, -1.0 / r10),
      s * Vec4d(0.0, 0.0, r3 / std::sqrt(2.0), -1.0 / r10),
      s * Vec4d(0.0, 0.0, 0.0, 4.0 / r10),
  };
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) p.edges.push_back({a, b});

  std::map<Triangle, int> face_index;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c) {
        face_index[{a, b, c}] = static_cast<int>(p.faces.size());
        p.face_group.push_back(static_cast<int>(p.faces.size()));
        p.faces.push_back({a, b, c});
      }

  // Cells are the 4-subsets, lexicographic.
  for (int omit = 4; omit >= 0; --omit) {
    std::vector<int> verts;
    for (int v = 0; v < 5; ++v)
      if (v != omit) verts.push_back(v);
    std::vector<int> cell;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) cell.push_back(face_index.at({verts[i], verts[j], verts[k]}));
    std::sort(cell.begin(), cell.end());
    p.cells.push_back(std::move(cell));
  }
  fill_face_to_cells(p);
  return p;
}

Polytope4 make_hypercube(double edge_length) {
  require_positive(edge_length);
  const double h = edge_length / 2.0;

  // Vertex index bits (3..0) select the sign of (x,y,z,w); lexicographic.
  auto bit = [](int axis) { return 1 << (3 - axis); };
  Polytope4 p;
  p.name = "hypercube";
  for (int i = 0; i < 16; ++i) {
    Vec4d v;
    for (int axis = 0; axis < 4; ++axis) v(axis) = (i & bit(axis)) ? h : -h;
    p.vertices.push_back(v);
  }
  for (int a = 0; a < 16; ++a)
    for (int axis = 3; axis >= 0; --axis) {
      const int b = a ^ bit(axis);
      if (b > a) p.edges.push_back({a, b});
    }
  std::sort(p.edges.begin(), p.edges.end());

  // Squares as cycles v, v^A, v^A^B, v^B.
  std::vector<std::array<int, 4>> squares;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int base = 0; base < 16; ++base) {
        if (base & (bit(a) | bit(b))) continue;
        squares.push_back({base, base ^ bit(a), base ^ bit(a) ^ bit(b), base ^ bit(b)});
      }
  std::sort(squares.begin(), squares.end(), [](auto l, auto r) {
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    return l < r;
  });
  for (int g = 0; g < static_cast<int>(squares.size()); ++g) {
    const auto& q = squares[g];
    p.faces.push_back(sorted({q[0], q[1], q[2]}));
    p.faces.push_back(sorted({q[0], q[2], q[3]}));
    p.face_group.push_back(g);
    p.face_group.push_back(g);
  }

  // Cubes: one axis held at -h or +h.
  std::vector<std::pair<std::set<int>, std::vector<int>>> cubes;
  for (int axis = 0; axis < 4; ++axis)
    for (int side = 0; side < 2; ++side) {
      std::set<int> verts;
      for (int v = 0; v < 16; ++v)
        if (((v & bit(axis)) != 0) == (side == 1)) verts.insert(v);
      std::vector<int> faces;
      for (int f = 0; f < static_cast<int>(p.faces.size()); ++f) {
        const auto& t = p.faces[f];
        if (verts.count(t[0]) && verts.count(t[1]) && verts.count(t[2])) faces.push_back(f);
      }
      cubes.emplace_back(std::move(verts), std::move(faces));
    }
  std::sort(cubes.begin(), cubes.end());
  for (auto& cube : cubes) p.cells.push_back(std::move(cube.second));
  fill_face_to_cells(p);
  return p;
}

Polytope4 make_polytope(std::string_view name, double edge_length) {
  if (name == "pentachoron") return make_pentachoron(edge_length);
  if (name == "hypercube") return make_hypercube(edge_length);
  throw std::invalid_argument("unknown polytope: " + std::string(name));
}

ValidationReport validate(const Polytope4& p) {
  ValidationReport report;
  auto fail = [&](std::string name, std::string detail) {
    report.failures.push_back({std::move(name), std::move(detail)});
  };
  const int nv = static_cast<int>(p.vertices.size());
  const int nf = static_cast<int>(p.faces.size());
  auto vertex_ok = [&](int v) { return v >= 0 && v < nv; };

  for (int v = 0; v < nv; ++v)
    if (!p.vertices[v].allFinite()) fail("vertex_finite", "vertex " + std::to_string(v));

  bool indices_ok = true;
  std::set<Edge> edge_set;
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    const auto [a, b] = p.edges[e];
    if (!vertex_ok(a) || !vertex_ok(b) || a == b) {
      fail("edge_index_range", "edge " + std::to_string(e));
      indices_ok = false;
    } else if (!edge_set.insert(make_edge(a, b)).second) {
      fail("edge_duplicate", "edge " + std::to_string(e));
    }
  }

  std::set<Triangle> face_set;
  for (int f = 0; f < nf; ++f) {
    const auto& t = p.faces[f];
    const bool in_range = vertex_ok(t[0]) && vertex_ok(t[1]) && vertex_ok(t[2]);
    if (!in_range || t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      fail("face_index_range", "face " + std::to_string(f));
      indices_ok = false;
    } else if (!face_set.insert(sorted(t)).second) {
      fail("face_duplicate", "face " + std::to_string(f));
    }
  }
  if (p.face_group.size() != p.faces.size()) {
    fail("face_group_size", "face_group has " + std::to_string(p.face_group.size()) + " entries");
    indices_ok = false;
  } else {
    for (int g : p.face_group)
      if (g < 0 || g >= nf) {
        fail("face_group_size", "group id " + std::to_string(g));
        indices_ok = false;
        break;
      }
  }
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    for (int f : p.cells[c])
      if (f < 0 || f >= nf) {
        fail("cell_index_range", "cell " + std::to_string(c));
        indices_ok = false;
      }

  report.ok = report.failures.empty();
  if (!indices_ok) return report;

  // Face groups: a single cycle of real edges bounds each group; sides that
  // are not edges must be interior diagonals shared within the group.
  const int ngroups = p.face_group_count();
  std::vector<std::vector<int>> group_faces(ngroups);
  for (int f = 0; f < nf; ++f) group_faces[p.face_group[f]].push_back(f);
  std::map<Edge, std::set<int>> edge_groups;
  for (int g = 0; g < ngroups; ++g) {
    if (group_faces[g].empty()) {
      fail("face_group_edges", "group " + std::to_string(g) + " is empty");
      continue;
    }
    std::map<Edge, int> side_count;
    std::set<int> verts;
    for (int f : group_faces[g]) {
      for (const Edge& s : sides(p.faces[f])) ++side_count[s];
      verts.insert(p.faces[f].begin(), p.faces[f].end());
    }
    std::map<int, int> degree;
    bool ok = true;
    for (const auto& [s, count] : side_count) {
      if (edge_set.count(s)) {
        if (count != 1) ok = false;
        ++degree[s[0]];
        ++degree[s[1]];
        edge_groups[s].insert(g);
      } else if (count != 2) {
        ok = false;
      }
    }
    for (int v : verts)
      if (degree[v] != 2) ok = false;
    if (!ok) fail("face_group_edges", "group " + std::to_string(g));
  }
  for (const Edge& e : edge_set)
    if (edge_groups[e].size() < 2)
      fail("edge_face_count", "edge " + std::to_string(e[0]) + "-" + std::to_string(e[1]));

  const auto incidence = cells_of_faces(p);
  for (int f = 0; f < nf; ++f) {
    if (incidence[f].size() != 2) {
      fail("face_cell_count", "face " + std::to_string(f));
    } else if (f >= static_cast<int>(p.face_to_cells.size()) ||
               std::array<int, 2>{incidence[f][0], incidence[f][1]} != p.face_to_cells[f]) {
      fail("face_to_cells_mismatch", "face " + std::to_string(f));
    }
  }
  if (p.face_to_cells.size() != p.faces.size())
    fail("face_to_cells_mismatch", "size " + std::to_string(p.face_to_cells.size()));

  std::vector<Hyperplane> facets(p.cells.size());
  for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) {
    std::map<Edge, int> side_count;
    for (int f : p.cells[c])
      for (const Edge& s : sides(p.faces[f])) ++side_count[s];
    if (std::any_of(side_count.begin(), side_count.end(), [](const auto& kv) { return kv.second != 2; }))
      fail("cell_closed", "cell " + std::to_string(c));

    std::vector<Vec4d> pts;
    for (int v : cell_vertices(p, c)) pts.push_back(p.vertices[v]);
    facets[c] = fit_hyperplane(pts);
    if (!facets[c].ok) {
      fail("cell_planarity", "cell " + std::to_string(c));
      continue;
    }
    double lo = 0.0, hi = 0.0;
    for (const auto& v : p.vertices) {
      const double d = facets[c].normal.dot(v) - facets[c].offset;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (lo < -kGeomTol && hi > kGeomTol) {
      fail("facet_support", "cell " + std::to_string(c));
      facets[c].ok = false;
    }
  }

  // A vertex is extreme when the supporting facets through it have normals
  // of full rank.
  for (int v = 0; v < nv; ++v) {
    std::vector<Vec4d> normals;
    for (int c = 0; c < static_cast<int>(p.cells.size()); ++c)
      if (facets[c].ok && std::abs(facets[c].normal.dot(p.vertices[v]) - facets[c].offset) < kGeomTol)
        normals.push_back(facets[c].normal);
    Eigen::MatrixXd n(normals.size(), 4);
    for (std::size_t i = 0; i < normals.size(); ++i) n.row(i) = normals[i].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(n);
    lu.setThreshold(1e-9);
    if (normals.size() < 4 || lu.rank() < 4) fail("vertex_on_hull", "vertex " + std::to_string(v));
  }

  const long euler = static_cast<long>(nv) - static_cast<long>(p.edges.size()) + ngroups -
                     static_cast<long>(p.cells.size());
  if (euler != 0) fail("euler_poincare", "V-E+F-C = " + std::to_string(euler));

  if (p.name == "pentachoron") {
    for (const Edge& e : edge_set) {
      int count = 0;
      for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) {
        const auto verts = cell_vertices(p, c);
        if (verts.count(e[0]) && verts.count(e[1])) ++count;
      }
      if (count != 3)
        fail("edge_cell_count", "edge " + std::to_string(e[0]) + "-" + std::to_string(e[1]) +
                                    " in " + std::to_string(count) + " cells");
    }
  }

  report.ok = report.failures.empty();
  return report;
}

std::vector<Vec4d> rotated_positions(const Polytope4& p, const Rotation4d& r) {
  std::vector<Vec4d> out;
  out.reserve(p.vertices.size());
  for (const auto& v : p.vertices) out.push_back(apply(r, v));
  return out;
}

}  // namespace slice4d
