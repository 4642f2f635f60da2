#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace slice4d {

template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

using Vec4d = Vec4<double>;
using Mat4d = Mat4<double>;

// Axis order is x < y < z < w; the enumerator lists the plane's axes in
// that order.
enum class RotationPlane { xy, xz, xw, yz, yw, zw };

inline constexpr std::array<RotationPlane, 6> kAllPlanes = {
    RotationPlane::xy, RotationPlane::xz, RotationPlane::xw,
    RotationPlane::yz, RotationPlane::yw, RotationPlane::zw};

constexpr std::pair<int, int> plane_axes(RotationPlane plane) {
  switch (plane) {
    case RotationPlane::xy: return {0, 1};
    case RotationPlane::xz: return {0, 2};
    case RotationPlane::xw: return {0, 3};
    case RotationPlane::yz: return {1, 2};
    case RotationPlane::yw: return {1, 3};
    case RotationPlane::zw: return {2, 3};
  }
  return {0, 1};
}

std::string_view to_string(RotationPlane plane);
std::optional<RotationPlane> parse_plane(std::string_view name);

/// Two absolutely perpendicular coordinate planes (they share no axis).
/// Only (xy,zw), (xz,yw) and (xw,yz) exist, up to order; construction
/// through make() rejects anything else.
class PlanePair {
 public:
  static std::optional<PlanePair> make(RotationPlane first, RotationPlane second) {
    const auto [a0, a1] = plane_axes(first);
    const auto [b0, b1] = plane_axes(second);
    if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) return std::nullopt;
    return PlanePair(first, second);
  }

  RotationPlane first() const { return first_; }
  RotationPlane second() const { return second_; }

  friend bool operator==(const PlanePair&, const PlanePair&) = default;

 private:
  PlanePair(RotationPlane first, RotationPlane second) : first_(first), second_(second) {}
  RotationPlane first_;
  RotationPlane second_;
};

inline const PlanePair kPairXyZw = *PlanePair::make(RotationPlane::xy, RotationPlane::zw);
inline const PlanePair kPairXzYw = *PlanePair::make(RotationPlane::xz, RotationPlane::yw);
inline const PlanePair kPairXwYz = *PlanePair::make(RotationPlane::xw, RotationPlane::yz);

std::string to_string(const PlanePair& pair);
std::optional<PlanePair> parse_plane_pair(std::string_view name);

/// Gram-Schmidt on the rows of `m`, in row order.
template <typename Scalar>
Mat4<Scalar> orthonormalize_rows(const Mat4<Scalar>& m) {
  Mat4<Scalar> q = m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      q.row(i) -= q.row(i).dot(q.row(j)) * q.row(j);
    }
    q.row(i).normalize();
  }
  return q;
}

/// A proper orthogonal 4x4 matrix acting on column vectors (x,y,z,w).
/// Instances only come from the rotation builders, compose(), or
/// from_matrix(), which re-orthonormalizes its input.
template <typename Scalar>
class Rotation4 {
 public:
  Rotation4() : m_(Mat4<Scalar>::Identity()) {}

  static Rotation4 identity() { return Rotation4(); }

  /// Adopts a nearly orthogonal matrix (e.g. one read back from a file),
  /// snapping it onto the rotation group. Fails when the result is not a
  /// proper rotation within `tol`.
  static std::optional<Rotation4> from_matrix(const Mat4<Scalar>& m, Scalar tol = Scalar(1e-6)) {
    if (!m.allFinite()) return std::nullopt;
    if (((m * m.transpose()) - Mat4<Scalar>::Identity()).cwiseAbs().maxCoeff() > tol) {
      return std::nullopt;
    }
    Mat4<Scalar> q = orthonormalize_rows(m);
    if (q.determinant() < Scalar(0)) return std::nullopt;
    return Rotation4(q);
  }

  const Mat4<Scalar>& matrix() const { return m_; }
  Scalar operator()(int row, int col) const { return m_(row, col); }

  Rotation4 inverse() const { return Rotation4(m_.transpose()); }

  friend bool operator==(const Rotation4& a, const Rotation4& b) { return a.m_ == b.m_; }

  template <typename S>
  friend Rotation4<S> rotation_simple(RotationPlane plane, S alpha);
  template <typename S>
  friend Rotation4<S> compose(const Rotation4<S>& a, const Rotation4<S>& b);

 private:
  explicit Rotation4(const Mat4<Scalar>& m) : m_(m) {}
  Mat4<Scalar> m_;
};

using Rotation4d = Rotation4<double>;

/// Rotation by `alpha` in one coordinate plane (p,q), p before q:
/// p' = p cos - q sin, q' = p sin + q cos. The complement axes are fixed
/// exactly.
template <typename Scalar>
Rotation4<Scalar> rotation_simple(RotationPlane plane, Scalar alpha) {
  const auto [p, q] = plane_axes(plane);
  const Scalar c = std::cos(alpha);
  const Scalar s = std::sin(alpha);
  Mat4<Scalar> m = Mat4<Scalar>::Identity();
  m(p, p) = c;
  m(p, q) = -s;
  m(q, p) = s;
  m(q, q) = c;
  return Rotation4<Scalar>(m);
}

/// "Apply b, then a" in the fixed world frame, i.e. a.m * b.m, snapped back
/// onto the rotation group.
template <typename Scalar>
Rotation4<Scalar> compose(const Rotation4<Scalar>& a, const Rotation4<Scalar>& b) {
  return Rotation4<Scalar>(orthonormalize_rows<Scalar>(a.m_ * b.m_));
}

/// Simple rotations in the two planes of `pair`. They commute, so the
/// factor order is irrelevant.
template <typename Scalar>
Rotation4<Scalar> rotation_double(const PlanePair& pair, Scalar alpha, Scalar beta) {
  return compose(rotation_simple(pair.first(), alpha), rotation_simple(pair.second(), beta));
}

template <typename Scalar>
Vec4<Scalar> apply(const Rotation4<Scalar>& r, const Vec4<Scalar>& v) {
  return r.matrix() * v;
}

}  // namespace slice4d
