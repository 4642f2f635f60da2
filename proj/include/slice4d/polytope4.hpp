#pragma once

#include "slice4d/geom4.hpp"

#include <array>
#include <string>
#include <vector>

namespace slice4d {

using Edge = std::array<int, 2>;      // vertex indices, ascending
using Triangle = std::array<int, 3>;  // vertex indices

// Combinatorial 4-polytope with base (unrotated) coordinates.
//
// Faces are stored as triangles. A planar polygonal face with more than
// three vertices is split into triangles that share a `face_group` id; the
// group is the real 2-face and only edges listed in `edges` bound it (the
// splitting diagonals are not edges). Cells are lists of triangle indices.
struct Polytope4 {
  std::string name;
  std::vector<Vec4d> vertices;
  std::vector<Edge> edges;
  std::vector<Triangle> faces;
  std::vector<int> face_group;
  std::vector<std::vector<int>> cells;
  std::vector<std::array<int, 2>> face_to_cells;

  int face_group_count() const;
};

struct CheckResult {
  std::string name;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<CheckResult> failures;

  bool has_failure(std::string_view check) const;
};

Polytope4 make_pentachoron(double edge_length);
Polytope4 make_hypercube(double edge_length);

/// Builds by name: "pentachoron" or "hypercube".
Polytope4 make_polytope(std::string_view name, double edge_length);

/// Structural and geometric checks. Never throws; every failed check is
/// recorded by name. Check names: vertex_finite, edge_index_range,
/// edge_duplicate, face_index_range, face_duplicate, face_group_size,
/// face_group_edges, edge_face_count, cell_index_range, face_cell_count,
/// face_to_cells_mismatch, cell_closed, cell_planarity, facet_support,
/// vertex_on_hull, euler_poincare, edge_cell_count (pentachoron only).
ValidationReport validate(const Polytope4& p);

std::vector<Vec4d> rotated_positions(const Polytope4& p, const Rotation4d& r);

}  // namespace slice4d
