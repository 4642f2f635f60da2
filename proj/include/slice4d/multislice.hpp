#pragma once

#include "slice4d/geom4.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/slicer.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slice4d {

// Hyperplanes w = w_focus + n * delta_w for |n| <= (count - 1) / 2.
// The focus is kept as a whole number of delta_w steps away from w_origin
// so that focus shifts undo each other exactly.
struct SliceStackConfig {
  double delta_w = 0.25;
  int count = 13;
  double w_origin = 0.0;
  int focus_steps = 0;

  double w_focus() const { return w_origin + focus_steps * delta_w; }

  friend bool operator==(const SliceStackConfig&, const SliceStackConfig&) = default;
};

// Placement of slice n on the parabola (s*n, plane_height, -k*(s*n)^2).
struct LayoutParams {
  double spacing = 2.5;
  double curvature = 0.15;
  double plane_height = 0.0;

  friend bool operator==(const LayoutParams&, const LayoutParams&) = default;
};

struct SlicePlacement {
  int slice_index = 0;
  double w_value = 0.0;
  Eigen::Vector3d world_offset = Eigen::Vector3d::Zero();
  double scale = 1.0;

  friend bool operator==(const SlicePlacement&, const SlicePlacement&) = default;
};

enum class Channel { red, green, blue, yellow };

// One row per polytope vertex, channels (x,y,z,w) tagged (red,green,blue,yellow).
struct ParallelCoords {
  static constexpr std::array<Channel, 4> kChannels = {Channel::red, Channel::green, Channel::blue,
                                                       Channel::yellow};
  std::vector<Vec4d> values;

  friend bool operator==(const ParallelCoords&, const ParallelCoords&) = default;
};

std::string_view to_string(Channel channel);

enum class FocusDirection { left, right };

/// Empty when the config breaks its invariants, otherwise a message naming
/// the broken one.
std::optional<std::string> check_config(const SliceStackConfig& cfg);
std::optional<std::string> check_layout(const LayoutParams& params);

std::vector<double> stack_w_values(const SliceStackConfig& cfg);

SliceStackConfig shift_focus(SliceStackConfig cfg, FocusDirection direction);

std::vector<SlicePlacement> layout(const SliceStackConfig& cfg, const LayoutParams& params);

ParallelCoords parallel_coords(std::span<const Vec4d> positions);

struct PlacedSlice {
  SlicePlacement placement;
  SliceMesh mesh;

  friend bool operator==(const PlacedSlice&, const PlacedSlice&) = default;
};

std::vector<PlacedSlice> build_stack(const Polytope4& polytope, const Rotation4d& r, const SliceStackConfig& cfg,
                                     const LayoutParams& params);
std::vector<PlacedSlice> build_stack(const SliceTopology& topo, std::span<const Vec4d> positions,
                                     const SliceStackConfig& cfg, const LayoutParams& params);

}  // namespace slice4d
