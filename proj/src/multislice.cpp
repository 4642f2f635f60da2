#include "slice4d/multislice.hpp"

#include <cmath>

namespace slice4d {

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::red: return "red";
    case Channel::green: return "green";
    case Channel::blue: return "blue";
    case Channel::yellow: return "yellow";
  }
  return "?";
}

std::optional<std::string> check_config(const SliceStackConfig& cfg) {
  if (!(cfg.delta_w > 0.0) || !std::isfinite(cfg.delta_w)) return "delta_w must be positive";
  if (cfg.count <= 0 || cfg.count % 2 == 0) return "slice count must be a positive odd number";
  if (!std::isfinite(cfg.w_origin)) return "w_origin must be finite";
  return std::nullopt;
}

std::optional<std::string> check_layout(const LayoutParams& params) {
  if (!(params.spacing > 0.0) || !std::isfinite(params.spacing)) return "spacing must be positive";
  if (!(params.curvature >= 0.0) || !std::isfinite(params.curvature)) return "curvature must be non-negative";
  if (!std::isfinite(params.plane_height)) return "plane_height must be finite";
  return std::nullopt;
}

std::vector<double> stack_w_values(const SliceStackConfig& cfg) {
  const int half = (cfg.count - 1) / 2;
  std::vector<double> out;
  out.reserve(cfg.count);
  for (int n = -half; n <= half; ++n) out.push_back(cfg.w_origin + (cfg.focus_steps + n) * cfg.delta_w);
  return out;
}

SliceStackConfig shift_focus(SliceStackConfig cfg, FocusDirection direction) {
  cfg.focus_steps += direction == FocusDirection::right ? 1 : -1;
  return cfg;
}

std::vector<SlicePlacement> layout(const SliceStackConfig& cfg, const LayoutParams& params) {
  const auto w_values = stack_w_values(cfg);
  const int half = (cfg.count - 1) / 2;
  std::vector<SlicePlacement> out;
  out.reserve(w_values.size());
  for (int i = 0; i < static_cast<int>(w_values.size()); ++i) {
    const int n = i - half;
    const double x = params.spacing * n;
    out.push_back({n, w_values[i], Eigen::Vector3d(x, params.plane_height, -params.curvature * x * x), 1.0});
  }
  return out;
}

ParallelCoords parallel_coords(std::span<const Vec4d> positions) {
  return ParallelCoords{std::vector<Vec4d>(positions.begin(), positions.end())};
}

std::vector<PlacedSlice> build_stack(const SliceTopology& topo, std::span<const Vec4d> positions,
                                     const SliceStackConfig& cfg, const LayoutParams& params) {
  std::vector<PlacedSlice> out;
  for (auto& placement : layout(cfg, params)) {
    SliceMesh mesh = slice(topo, positions, placement.w_value);
    out.push_back({std::move(placement), std::move(mesh)});
  }
  return out;
}

std::vector<PlacedSlice> build_stack(const Polytope4& polytope, const Rotation4d& r, const SliceStackConfig& cfg,
                                     const LayoutParams& params) {
  const auto positions = rotated_positions(polytope, r);
  return build_stack(make_slice_topology(polytope), positions, cfg, params);
}

}  // namespace slice4d
