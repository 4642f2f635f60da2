#include "slice4d/scene_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

namespace slice4d {
namespace {

using nlohmann::json;

std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in scene document");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string out(buf);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

void dump_into(const json& value, std::string& out) {
  switch (value.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        dump_into(item, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out += ',';
        dump_into(value[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_double(value.get<double>());
      break;
    default:
      out += value.dump();
  }
}

json vec_json(const auto& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(static_cast<double>(v(i)));
  return arr;
}

json axes_glyph() {
  return {{"x", {{"color", "red"}, {"direction", {1.0, 0.0, 0.0}}}},
          {"y", {{"color", "green"}, {"direction", {0.0, 1.0, 0.0}}}},
          {"z", {{"color", "blue"}, {"direction", {0.0, 0.0, 1.0}}}}};
}

// Structural reader that reports a JSON pointer on failure.
class Reader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw SceneFormatError("scene document " + (path.empty() ? "/" : path) + ": " + what, std::nullopt,
                           path.empty() ? "/" : path);
  }

  static const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) fail(path, "expected object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing");
    return *it;
  }

  static const json& array(const json& v, const std::string& path, std::optional<std::size_t> size = {}) {
    if (!v.is_array()) fail(path, "expected array");
    if (size && v.size() != *size) fail(path, "expected " + std::to_string(*size) + " elements");
    return v;
  }

  static double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected number");
    return v.get<double>();
  }

  static int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(path, "out of range");
    return static_cast<int>(x);
  }

  static int index(const json& v, const std::string& path, std::size_t bound) {
    const int i = integer(v, path);
    if (i < 0 || static_cast<std::size_t>(i) >= bound) fail(path, "index " + std::to_string(i) + " unresolvable");
    return i;
  }

  static std::string string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected string");
    return v.get<std::string>();
  }

  template <int N>
  static Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& path) {
    array(v, path, N);
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) out(i) = number(v[i], path + "/" + std::to_string(i));
    return out;
  }
};

}  // namespace

std::string canonical_dump(const json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

json scene_to_json(const SceneDoc& scene) {
  json rotation = json::array();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rotation.push_back(scene.rotation(r, c));

  json slices = json::array();
  for (const auto& placed : scene.slices) {
    json points = json::array();
    for (const auto& p : placed.mesh.points)
      points.push_back({p.edge_id, p.t, p.pos3.x(), p.pos3.y(), p.pos3.z()});
    json segments = json::array();
    for (const auto& s : placed.mesh.segments) segments.push_back({s.face_id, s.endpoints[0], s.endpoints[1]});
    json polygons = json::array();
    for (const auto& poly : placed.mesh.polygons) polygons.push_back({{"cell_id", poly.cell_id}, {"ring", poly.ring}});
    const auto& pl = placed.placement;
    slices.push_back({{"w_value", placed.mesh.w_value},
                      {"placement",
                       {{"slice_index", pl.slice_index},
                        {"w_value", pl.w_value},
                        {"world_offset", vec_json(pl.world_offset)},
                        {"scale", pl.scale}}},
                      {"points", points},
                      {"segments", segments},
                      {"polygons", polygons}});
  }

  json vertices = json::array();
  for (const auto& v : scene.parallel_coords.values) vertices.push_back(vec_json(v));
  json channels = json::array();
  for (Channel c : ParallelCoords::kChannels) channels.push_back(std::string(to_string(c)));

  return {{"schema_version", scene.schema_version},
          {"polytope_name", scene.polytope_name},
          {"rotation", rotation},
          {"angle_steps", {{"alpha", scene.alpha_step}, {"beta", scene.beta_step}}},
          {"stack",
           {{"delta_w", scene.stack.delta_w},
            {"count", scene.stack.count},
            {"w_origin", scene.stack.w_origin},
            {"focus_steps", scene.stack.focus_steps},
            {"w_focus", scene.stack.w_focus()}}},
          {"layout",
           {{"spacing", scene.layout.spacing},
            {"curvature", scene.layout.curvature},
            {"plane_height", scene.layout.plane_height}}},
          {"slices", slices},
          {"parallel_coords", {{"channels", channels}, {"vertices", vertices}}},
          {"axes_glyph", axes_glyph()}};
}

SceneDoc scene_from_json(const json& doc) {
  using R = Reader;
  SceneDoc scene;
  scene.schema_version = R::string(R::field(doc, "", "schema_version"), "/schema_version");
  if (scene.schema_version != kSceneSchemaVersion)
    throw SchemaVersionError(scene.schema_version, std::string(kSceneSchemaVersion));

  scene.polytope_name = R::string(R::field(doc, "", "polytope_name"), "/polytope_name");

  const auto& rot = R::array(R::field(doc, "", "rotation"), "/rotation", 16);
  for (int i = 0; i < 16; ++i) scene.rotation(i / 4, i % 4) = R::number(rot[i], "/rotation/" + std::to_string(i));

  const auto& angles = R::field(doc, "", "angle_steps");
  scene.alpha_step = R::number(R::field(angles, "/angle_steps", "alpha"), "/angle_steps/alpha");
  scene.beta_step = R::number(R::field(angles, "/angle_steps", "beta"), "/angle_steps/beta");

  const auto& stack = R::field(doc, "", "stack");
  scene.stack.delta_w = R::number(R::field(stack, "/stack", "delta_w"), "/stack/delta_w");
  scene.stack.count = R::integer(R::field(stack, "/stack", "count"), "/stack/count");
  scene.stack.w_origin = R::number(R::field(stack, "/stack", "w_origin"), "/stack/w_origin");
  scene.stack.focus_steps = R::integer(R::field(stack, "/stack", "focus_steps"), "/stack/focus_steps");
  if (auto bad = check_config(scene.stack)) R::fail("/stack", *bad);

  const auto& lay = R::field(doc, "", "layout");
  scene.layout.spacing = R::number(R::field(lay, "/layout", "spacing"), "/layout/spacing");
  scene.layout.curvature = R::number(R::field(lay, "/layout", "curvature"), "/layout/curvature");
  scene.layout.plane_height = R::number(R::field(lay, "/layout", "plane_height"), "/layout/plane_height");

  const auto& slices = R::array(R::field(doc, "", "slices"), "/slices");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const std::string base = "/slices/" + std::to_string(i);
    const auto& s = slices[i];
    PlacedSlice placed;
    placed.mesh.w_value = R::number(R::field(s, base, "w_value"), base + "/w_value");

    const auto& pl = R::field(s, base, "placement");
    const std::string pbase = base + "/placement";
    placed.placement.slice_index = R::integer(R::field(pl, pbase, "slice_index"), pbase + "/slice_index");
    placed.placement.w_value = R::number(R::field(pl, pbase, "w_value"), pbase + "/w_value");
    placed.placement.world_offset = R::vec<3>(R::field(pl, pbase, "world_offset"), pbase + "/world_offset");
    placed.placement.scale = R::number(R::field(pl, pbase, "scale"), pbase + "/scale");

    const auto& points = R::array(R::field(s, base, "points"), base + "/points");
    for (std::size_t k = 0; k < points.size(); ++k) {
      const std::string at = base + "/points/" + std::to_string(k);
      const auto& p = R::array(points[k], at, 5);
      placed.mesh.points.push_back({R::integer(p[0], at + "/0"), R::number(p[1], at + "/1"),
                                    Eigen::Vector3d(R::number(p[2], at + "/2"), R::number(p[3], at + "/3"),
                                                    R::number(p[4], at + "/4"))});
    }
    const std::size_t npoints = placed.mesh.points.size();

    const auto& segments = R::array(R::field(s, base, "segments"), base + "/segments");
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const std::string at = base + "/segments/" + std::to_string(k);
      const auto& seg = R::array(segments[k], at, 3);
      placed.mesh.segments.push_back(
          {R::integer(seg[0], at + "/0"), {R::index(seg[1], at + "/1", npoints), R::index(seg[2], at + "/2", npoints)}});
    }

    const auto& polygons = R::array(R::field(s, base, "polygons"), base + "/polygons");
    for (std::size_t k = 0; k < polygons.size(); ++k) {
      const std::string at = base + "/polygons/" + std::to_string(k);
      SlicePolygon poly;
      poly.cell_id = R::integer(R::field(polygons[k], at, "cell_id"), at + "/cell_id");
      const auto& ring = R::array(R::field(polygons[k], at, "ring"), at + "/ring");
      for (std::size_t r = 0; r < ring.size(); ++r)
        poly.ring.push_back(R::index(ring[r], at + "/ring/" + std::to_string(r), npoints));
      placed.mesh.polygons.push_back(std::move(poly));
    }
    scene.slices.push_back(std::move(placed));
  }

  const auto& pc = R::field(doc, "", "parallel_coords");
  const auto& vertices = R::array(R::field(pc, "/parallel_coords", "vertices"), "/parallel_coords/vertices");
  for (std::size_t k = 0; k < vertices.size(); ++k)
    scene.parallel_coords.values.push_back(R::vec<4>(vertices[k], "/parallel_coords/vertices/" + std::to_string(k)));
  return scene;
}

std::string write_scene(const SceneDoc& scene) { return canonical_dump(scene_to_json(scene)) + "\n"; }

SceneDoc read_scene(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SceneFormatError(std::string("scene document parse error: ") + e.what(), e.byte, "");
  }
  return scene_from_json(doc);
}

std::optional<std::string> export_mesh(const SliceMesh& mesh, const SlicePlacement& placement,
                                       const Mat4d& rotation) {
  if (mesh.empty()) return std::nullopt;
  std::ostringstream out;
  out << "# slice4d cross section\n";
  out << "# w_value " << format_double(mesh.w_value) << "\n";
  for (int r = 0; r < 4; ++r) {
    out << "# rotation";
    for (int c = 0; c < 4; ++c) out << ' ' << format_double(rotation(r, c));
    out << "\n";
  }
  out << "o slice_" << placement.slice_index << "\n";
  for (const auto& p : mesh.points) {
    const Eigen::Vector3d world = placement.world_offset + placement.scale * p.pos3;
    out << "v " << format_double(world.x()) << ' ' << format_double(world.y()) << ' ' << format_double(world.z())
        << "\n";
  }
  for (const auto& poly : mesh.polygons) {
    out << 'f';
    for (int i : poly.ring) out << ' ' << i + 1;
    out << "\n";
  }
  return out.str();
}

}  // namespace slice4d
