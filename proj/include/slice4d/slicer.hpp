#pragma once

#include "slice4d/geom4.hpp"
#include "slice4d/polytope4.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace slice4d {

/// Vertices within this distance of the hyperplane count as lying on its
/// positive side.
inline constexpr double kOnPlaneTol = 1e-9;

// Crossing of an edge (a,b), a < b, with the hyperplane: the 4-D point is
// (1-t)*a + t*b and pos3 is its (x,y,z) part.
struct SlicePoint {
  int edge_id = 0;
  double t = 0.0;
  Eigen::Vector3d pos3 = Eigen::Vector3d::Zero();

  friend bool operator==(const SlicePoint&, const SlicePoint&) = default;
};

// Cross section of one 2-face (a face group); endpoints index the mesh's points.
struct SliceSegment {
  int face_id = 0;
  std::array<int, 2> endpoints{};

  friend bool operator==(const SliceSegment&, const SliceSegment&) = default;
};

// Cross section of one cell; ring indexes the mesh's points, cyclic.
struct SlicePolygon {
  int cell_id = 0;
  std::vector<int> ring;

  friend bool operator==(const SlicePolygon&, const SlicePolygon&) = default;
};

struct SliceMesh {
  double w_value = 0.0;
  std::vector<SlicePoint> points;
  std::vector<SliceSegment> segments;
  std::vector<SlicePolygon> polygons;

  bool empty() const { return points.empty(); }

  friend bool operator==(const SliceMesh&, const SliceMesh&) = default;
};

/// Raised when the mesh combinatorics break (a face crossed by other than 0
/// or 2 edges, an open or split cell chain). Signals corrupted topology.
class SliceConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incidence the slicer walks, derived once per polytope.
struct SliceTopology {
  std::vector<Edge> edges;
  std::vector<std::vector<int>> face_edges;  // per face group: bounding edge ids
  std::vector<std::vector<int>> cell_faces;  // per cell: face group ids, ascending
};

SliceTopology make_slice_topology(const Polytope4& p);

std::vector<SlicePoint> slice_edges(std::span<const Vec4d> positions, std::span<const Edge> edges, double c);

std::vector<SliceSegment> slice_faces(std::span<const SlicePoint> points, const SliceTopology& topo);

/// Chains each cell's segments into a closed ring starting at its lowest
/// point index. Rings are oriented so their normal has non-negative dot
/// with +z, or +y (then +x) when perpendicular to it.
std::vector<SlicePolygon> slice_cells(std::span<const SlicePoint> points,
                                      std::span<const SliceSegment> segments, const SliceTopology& topo);

SliceMesh slice(const Polytope4& polytope, const Rotation4d& r, double c);
SliceMesh slice(const SliceTopology& topo, std::span<const Vec4d> positions, double c);

/// Newell normal of a closed ring (unnormalized; length is twice the area).
Eigen::Vector3d ring_normal(std::span<const SlicePoint> points, std::span<const int> ring);

}  // namespace slice4d
