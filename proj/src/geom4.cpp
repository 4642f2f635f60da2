#include "slice4d/geom4.hpp"

namespace slice4d {

std::string_view to_string(RotationPlane plane) {
  switch (plane) {
    case RotationPlane::xy: return "xy";
    case RotationPlane::xz: return "xz";
    case RotationPlane::xw: return "xw";
    case RotationPlane::yz: return "yz";
    case RotationPlane::yw: return "yw";
    case RotationPlane::zw: return "zw";
  }
  return "?";
}

std::optional<RotationPlane> parse_plane(std::string_view name) {
  for (RotationPlane p : kAllPlanes) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string to_string(const PlanePair& pair) {
  std::string out(to_string(pair.first()));
  out += ',';
  out += to_string(pair.second());
  return out;
}

std::optional<PlanePair> parse_plane_pair(std::string_view name) {
  const auto comma = name.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const auto first = parse_plane(name.substr(0, comma));
  const auto second = parse_plane(name.substr(comma + 1));
  if (!first || !second) return std::nullopt;
  return PlanePair::make(*first, *second);
}

}  // namespace slice4d
