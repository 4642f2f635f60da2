#include "slice4d/slicer.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace slice4d {
namespace {

using std::numbers::pi;
using testing::check_closed_convex;

const Polytope4& pentachoron() {
  static const Polytope4 p = make_pentachoron(2.0);
  return p;
}

const Polytope4& hypercube() {
  static const Polytope4 p = make_hypercube(2.0);
  return p;
}

int edge_index(const Polytope4& p, int a, int b) {
  for (int e = 0; e < static_cast<int>(p.edges.size()); ++e)
    if (p.edges[e] == Edge{a, b}) return e;
  return -1;
}

TEST(SliceEdgesTest, InitialPoseCutsTheFourEdgesAtP4) {
  const auto& p = pentachoron();
  const auto points = slice_edges(p.vertices, p.edges, 0.0);
  ASSERT_EQ(points.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(points[i].edge_id, edge_index(p, i, 4));
    // t runs from the lower-indexed endpoint Pi towards P4.
    EXPECT_NEAR(points[i].t, 0.2, 1e-15);
    const Vec4d lift = 0.8 * p.vertices[i] + 0.2 * p.vertices[4];
    EXPECT_LT((points[i].pos3 - lift.head<3>()).norm(), 1e-15);
  }
}

TEST(SliceEdgesTest, MissingHyperplaneGivesNothing) {
  const auto& p = pentachoron();
  EXPECT_TRUE(slice_edges(p.vertices, p.edges, 2.0).empty());
  EXPECT_TRUE(slice_edges(p.vertices, p.edges, -2.0).empty());
}

TEST(SliceEdgesTest, EdgeParallelToHyperplaneIsSkipped) {
  const std::vector<Vec4d> pos = {Vec4d(0, 0, 0, 0.5), Vec4d(1, 0, 0, 0.5), Vec4d(0, 0, 0, -0.5)};
  const std::vector<Edge> edges = {{0, 1}, {0, 2}};
  const auto points = slice_edges(pos, edges, 0.0);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].edge_id, 1);
  EXPECT_DOUBLE_EQ(points[0].t, 0.5);
}

TEST(SliceFacesTest, InitialPoseHasSixSegments) {
  const auto& p = pentachoron();
  const auto topo = make_slice_topology(p);
  const auto segments = slice_faces(slice_edges(p.vertices, p.edges, 0.0), topo);
  ASSERT_EQ(segments.size(), 6u);
  for (const auto& s : segments) {
    const auto& t = p.faces[s.face_id];
    EXPECT_EQ(t[2], 4) << "face without P4 crossed";
  }
  EXPECT_TRUE(slice_faces({}, topo).empty());
}

TEST(SliceCellsTest, InitialPoseHasFourTriangles) {
  const auto mesh = slice(pentachoron(), Rotation4d::identity(), 0.0);
  ASSERT_EQ(mesh.polygons.size(), 4u);
  for (const auto& poly : mesh.polygons) {
    EXPECT_EQ(poly.ring.size(), 3u);
    EXPECT_NE(poly.cell_id, 0) << "cell P0P1P2P3 lies below w = 0";
  }
  const auto topo = make_slice_topology(pentachoron());
  EXPECT_TRUE(slice_cells({}, {}, topo).empty());
}

TEST(SliceTest, InitialCentreSliceIsRegularTetrahedron) {
  const auto& p = pentachoron();
  const auto mesh = slice(p, Rotation4d::identity(), 0.0);
  ASSERT_EQ(mesh.points.size(), 4u);
  EXPECT_EQ(mesh.segments.size(), 6u);
  EXPECT_EQ(mesh.polygons.size(), 4u);
  // Oracle: points 4/5 of the way from P4 towards each Pi.
  const auto v = testing::reference_pentachoron();
  std::vector<Eigen::Vector3d> expected;
  for (int i = 0; i < 4; ++i) expected.push_back((v[4] + 0.8 * (v[i] - v[4])).head<3>());
  for (int i = 0; i < 4; ++i) EXPECT_LT((mesh.points[i].pos3 - expected[i]).norm(), 1e-12);
  for (const auto& s : mesh.segments)
    EXPECT_NEAR((mesh.points[s.endpoints[0]].pos3 - mesh.points[s.endpoints[1]].pos3).norm(), 1.6, 1e-9);
  const auto check = check_closed_convex(mesh);
  EXPECT_TRUE(check.ok) << check.why;
}

TEST(SliceTest, TwoOverThreeSplitGivesPrism) {
  const auto r = rotation_simple(RotationPlane::yw, 0.5);
  const auto pos = rotated_positions(pentachoron(), r);
  ASSERT_EQ(std::count_if(pos.begin(), pos.end(), [](const Vec4d& v) { return v.w() > 0; }), 2);
  const auto mesh = slice(pentachoron(), r, 0.0);
  EXPECT_EQ(mesh.points.size(), 6u);
  EXPECT_EQ(mesh.segments.size(), 9u);
  EXPECT_EQ(mesh.polygons.size(), 5u);
  const auto sizes = testing::polygon_sizes(mesh);
  EXPECT_EQ(sizes[0], 2);
  EXPECT_EQ(sizes[1], 3);
  const auto check = check_closed_convex(mesh);
  EXPECT_TRUE(check.ok) << check.why;
}

TEST(SliceTest, SegmentCountMatchesRingsInRotatedPose) {
  const auto r = rotation_double(kPairXwYz, -pi / std::sqrt(3.0), pi / std::sqrt(3.0) - pi / std::sqrt(8.0));
  const auto mesh = slice(pentachoron(), r, 0.0);
  ASSERT_FALSE(mesh.empty());
  std::size_t ring_sides = 0;
  for (const auto& poly : mesh.polygons) ring_sides += poly.ring.size();
  EXPECT_EQ(mesh.segments.size() * 2, ring_sides);
  const auto check = check_closed_convex(mesh);
  EXPECT_TRUE(check.ok) << check.why;
}

TEST(SliceTest, RingsAreOrientedTowardsReference) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> c(-0.3, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mesh = slice(pentachoron(), testing::random_rotation(rng), c(rng));
    for (const auto& poly : mesh.polygons) {
      const Eigen::Vector3d n = ring_normal(mesh.points, poly.ring);
      if (std::abs(n.z()) > 1e-9 * n.norm()) {
        EXPECT_GT(n.z(), 0.0);
      } else if (std::abs(n.y()) > 1e-9 * n.norm()) {
        EXPECT_GT(n.y(), 0.0);
      }
      EXPECT_EQ(poly.ring.front(), *std::min_element(poly.ring.begin(), poly.ring.end()));
    }
  }
}

TEST(SliceTest, PointsLieInsideThePolytope) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = testing::random_rotation(rng);
    const auto pos = rotated_positions(pentachoron(), r);
    double lo = pos[0].w(), hi = pos[0].w();
    for (const auto& v : pos) lo = std::min(lo, v.w()), hi = std::max(hi, v.w());
    const double c = std::uniform_real_distribution<double>(lo, hi)(rng);
    const auto facets = testing::simplex_half_spaces(pos);
    for (const auto& pt : slice(pentachoron(), r, c).points) {
      const Vec4d lift(pt.pos3.x(), pt.pos3.y(), pt.pos3.z(), c);
      for (const auto& h : facets) EXPECT_GE(h.normal.dot(lift) - h.offset, -1e-9);
    }
  }
}

TEST(SliceTest, GenericSlicesAreClosedConvexPolyhedra) {
  std::mt19937_64 rng(37);
  for (const Polytope4* poly : {&pentachoron(), &hypercube()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto r = testing::random_rotation(rng);
      const double c = std::uniform_real_distribution<double>(-0.6, 0.6)(rng);
      const auto mesh = slice(*poly, r, c);
      if (mesh.empty()) continue;
      const auto check = check_closed_convex(mesh);
      EXPECT_TRUE(check.ok) << poly->name << ": " << check.why;
    }
  }
}

TEST(SliceTest, CommutesWithRotationsThatKeepW) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = angle(rng);
    const double c = std::uniform_real_distribution<double>(-0.3, 1.2)(rng);
    const auto base = slice(pentachoron(), Rotation4d::identity(), c);
    const auto turned = slice(pentachoron(), rotation_simple(RotationPlane::xy, a), c);
    ASSERT_EQ(base.points.size(), turned.points.size());
    const Eigen::Matrix3d rot3 = rotation_simple(RotationPlane::xy, a).matrix().topLeftCorner<3, 3>();
    for (std::size_t i = 0; i < base.points.size(); ++i) {
      EXPECT_EQ(base.points[i].edge_id, turned.points[i].edge_id);
      EXPECT_LT((rot3 * base.points[i].pos3 - turned.points[i].pos3).norm(), 1e-9);
    }
  }
}

TEST(SliceTest, EmptyExactlyOutsideTheWExtent) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = testing::random_rotation(rng);
    const auto pos = rotated_positions(pentachoron(), r);
    double lo = pos[0].w(), hi = pos[0].w();
    for (const auto& v : pos) lo = std::min(lo, v.w()), hi = std::max(hi, v.w());
    const double c = std::uniform_real_distribution<double>(lo - 0.5, hi + 0.5)(rng);
    if (std::abs(c - lo) < 1e-6 || std::abs(c - hi) < 1e-6) continue;
    EXPECT_EQ(slice(pentachoron(), r, c).empty(), c < lo || c > hi);
  }
}

TEST(SliceTest, VertexOnHyperplaneCountsAsAbove) {
  const auto& p = pentachoron();
  // P0..P3 all sit on this hyperplane: everything is on the positive side.
  EXPECT_TRUE(slice(p, Rotation4d::identity(), -1.0 / std::sqrt(10.0)).empty());

  // P4 on the hyperplane: four crossings collapse onto P4 but the
  // combinatorics stay those of a tetrahedron.
  const auto mesh = slice(p, Rotation4d::identity(), 4.0 / std::sqrt(10.0));
  EXPECT_EQ(mesh.points.size(), 4u);
  EXPECT_EQ(mesh.segments.size(), 6u);
  EXPECT_EQ(mesh.polygons.size(), 4u);
  for (const auto& pt : mesh.points) {
    EXPECT_GE(pt.t, 0.0);
    EXPECT_LE(pt.t, 1.0);
    EXPECT_LT(pt.pos3.norm(), 1e-9);
  }

  // The top facet counts as above, so the slice at w = 1 is that cube.
  const auto& cube = hypercube();
  const auto flat = slice(cube, Rotation4d::identity(), 1.0);
  EXPECT_EQ(flat.points.size(), 8u);
  EXPECT_EQ(flat.segments.size(), 12u);
  EXPECT_EQ(flat.polygons.size(), 6u);
  EXPECT_TRUE(slice(cube, Rotation4d::identity(), -1.0).empty());

  // An eighth turn in xw puts eight hypercube vertices on w = 0.
  const auto edge_on = slice(cube, rotation_simple(RotationPlane::xw, pi / 4), 0.0);
  const auto check = check_closed_convex(edge_on);
  EXPECT_EQ(check.v - check.e + check.f, 2);
}

TEST(SliceTest, HypercubeMidSliceIsACube) {
  const auto mesh = slice(make_hypercube(2.0), Rotation4d::identity(), 0.0);
  EXPECT_EQ(mesh.points.size(), 8u);
  EXPECT_EQ(mesh.segments.size(), 12u);
  EXPECT_EQ(mesh.polygons.size(), 6u);
  for (const auto& poly : mesh.polygons) EXPECT_EQ(poly.ring.size(), 4u);
  for (const auto& pt : mesh.points)
    for (int i = 0; i < 3; ++i) EXPECT_EQ(std::abs(pt.pos3(i)), 1.0);
  const auto check = check_closed_convex(mesh);
  EXPECT_TRUE(check.ok) << check.why;
}

TEST(SliceTest, OutputIsOrderedByIndex) {
  std::mt19937_64 rng(47);
  const auto mesh = slice(make_hypercube(2.0), testing::random_rotation(rng), 0.1);
  ASSERT_FALSE(mesh.empty());
  EXPECT_TRUE(std::is_sorted(mesh.points.begin(), mesh.points.end(),
                             [](const auto& a, const auto& b) { return a.edge_id < b.edge_id; }));
  EXPECT_TRUE(std::is_sorted(mesh.segments.begin(), mesh.segments.end(),
                             [](const auto& a, const auto& b) { return a.face_id < b.face_id; }));
  EXPECT_TRUE(std::is_sorted(mesh.polygons.begin(), mesh.polygons.end(),
                             [](const auto& a, const auto& b) { return a.cell_id < b.cell_id; }));
}

TEST(SliceTest, BrokenTopologyIsDetected) {
  // Triangle (0,1,2) that claims a fourth, crossing edge.
  const std::vector<Vec4d> pos = {Vec4d(0, 0, 0, 1), Vec4d(1, 0, 0, -1), Vec4d(0, 1, 0, -1), Vec4d(0, 0, 1, -1)};
  SliceTopology topo;
  topo.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}};
  topo.face_edges = {{0, 1, 2}};
  topo.cell_faces = {{0}};
  EXPECT_THROW(slice(topo, pos, 0.0), SliceConsistencyError);

  // A cell whose only face yields an open chain.
  topo.face_edges = {{0, 1, 3}};
  EXPECT_THROW(slice(topo, pos, 0.0), SliceConsistencyError);
}

}  // namespace
}  // namespace slice4d
