#include "slice4d/slicer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace slice4d {
namespace {

bool positive_side(double w, double c) { return w - c > -kOnPlaneTol; }

}  // namespace

SliceTopology make_slice_topology(const Polytope4& p) {
  SliceTopology topo;
  topo.edges = p.edges;
  std::map<Edge, int> edge_index;
  for (int e = 0; e < static_cast<int>(p.edges.size()); ++e) {
    const auto [a, b] = p.edges[e];
    edge_index[{std::min(a, b), std::max(a, b)}] = e;
  }

  const int ngroups = p.face_group_count();
  std::vector<std::set<int>> group_edges(ngroups);
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    const auto& t = p.faces[f];
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      const auto it = edge_index.find({std::min(a, b), std::max(a, b)});
      if (it != edge_index.end()) group_edges[p.face_group[f]].insert(it->second);
    }
  }
  for (auto& g : group_edges) topo.face_edges.emplace_back(g.begin(), g.end());

  for (const auto& cell : p.cells) {
    std::set<int> groups;
    for (int f : cell) groups.insert(p.face_group[f]);
    topo.cell_faces.emplace_back(groups.begin(), groups.end());
  }
  return topo;
}

std::vector<SlicePoint> slice_edges(std::span<const Vec4d> positions, std::span<const Edge> edges, double c) {
  std::vector<SlicePoint> points;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const int lo = std::min(edges[e][0], edges[e][1]);
    const int hi = std::max(edges[e][0], edges[e][1]);
    const Vec4d& a = positions[lo];
    const Vec4d& b = positions[hi];
    if (positive_side(a.w(), c) == positive_side(b.w(), c)) continue;
    // Perturbed on-plane vertices can put t marginally outside [0,1].
    const double t = std::clamp((c - a.w()) / (b.w() - a.w()), 0.0, 1.0);
    const Vec4d x = (1.0 - t) * a + t * b;
    points.push_back({e, t, x.head<3>()});
  }
  return points;
}

std::vector<SliceSegment> slice_faces(std::span<const SlicePoint> points, const SliceTopology& topo) {
  std::vector<int> point_of_edge(topo.edges.size(), -1);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) point_of_edge[points[i].edge_id] = i;

  std::vector<SliceSegment> segments;
  if (points.empty()) return segments;
  for (int f = 0; f < static_cast<int>(topo.face_edges.size()); ++f) {
    std::array<int, 2> ends{};
    int hits = 0;
    for (int e : topo.face_edges[f]) {
      if (point_of_edge[e] < 0) continue;
      if (hits < 2) ends[hits] = point_of_edge[e];
      ++hits;
    }
    if (hits == 0) continue;
    if (hits != 2) {
      throw SliceConsistencyError("face " + std::to_string(f) + " crossed by " + std::to_string(hits) +
                                  " edges");
    }
    segments.push_back({f, ends});
  }
  return segments;
}

Eigen::Vector3d ring_normal(std::span<const SlicePoint> points, std::span<const int> ring) {
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Eigen::Vector3d& a = points[ring[i]].pos3;
    const Eigen::Vector3d& b = points[ring[(i + 1) % ring.size()]].pos3;
    n += a.cross(b);
  }
  return n;
}

std::vector<SlicePolygon> slice_cells(std::span<const SlicePoint> points,
                                      std::span<const SliceSegment> segments, const SliceTopology& topo) {
  std::vector<SlicePolygon> polygons;
  if (segments.empty()) return polygons;

  std::vector<int> segment_of_face(topo.face_edges.size(), -1);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) segment_of_face[segments[s].face_id] = s;

  for (int c = 0; c < static_cast<int>(topo.cell_faces.size()); ++c) {
    // point -> incident segments of this cell, ascending by face id
    std::map<int, std::vector<int>> incident;
    for (int f : topo.cell_faces[c]) {
      const int s = segment_of_face[f];
      if (s < 0) continue;
      incident[segments[s].endpoints[0]].push_back(s);
      incident[segments[s].endpoints[1]].push_back(s);
    }
    if (incident.empty()) continue;
    for (const auto& [pt, segs] : incident) {
      if (segs.size() != 2) {
        throw SliceConsistencyError("cell " + std::to_string(c) + " chain is open at point " +
                                    std::to_string(pt));
      }
    }

    SlicePolygon polygon{c, {}};
    const int start = incident.begin()->first;
    int current = start;
    int via = incident.at(start)[0];
    do {
      polygon.ring.push_back(current);
      const auto& ends = segments[via].endpoints;
      const int next = ends[0] == current ? ends[1] : ends[0];
      const auto& segs = incident.at(next);
      via = segs[0] == via ? segs[1] : segs[0];
      current = next;
    } while (current != start && polygon.ring.size() <= incident.size());
    if (polygon.ring.size() != incident.size() || polygon.ring.size() < 3) {
      throw SliceConsistencyError("cell " + std::to_string(c) + " yields " +
                                  std::to_string(polygon.ring.size()) + " of " +
                                  std::to_string(incident.size()) + " points in one chain");
    }

    const Eigen::Vector3d n = ring_normal(points, polygon.ring);
    const double len = n.norm();
    for (const Eigen::Vector3d& ref : {Eigen::Vector3d::UnitZ().eval(), Eigen::Vector3d::UnitY().eval(),
                                       Eigen::Vector3d::UnitX().eval()}) {
      const double d = n.dot(ref);
      if (std::abs(d) <= 1e-9 * len) continue;
      if (d < 0.0) std::reverse(polygon.ring.begin() + 1, polygon.ring.end());
      break;
    }
    polygons.push_back(std::move(polygon));
  }
  return polygons;
}

SliceMesh slice(const SliceTopology& topo, std::span<const Vec4d> positions, double c) {
  SliceMesh mesh;
  mesh.w_value = c;
  mesh.points = slice_edges(positions, topo.edges, c);
  mesh.segments = slice_faces(mesh.points, topo);
  mesh.polygons = slice_cells(mesh.points, mesh.segments, topo);
  return mesh;
}

SliceMesh slice(const Polytope4& polytope, const Rotation4d& r, double c) {
  const auto positions = rotated_positions(polytope, r);
  return slice(make_slice_topology(polytope), positions, c);
}

}  // namespace slice4d
