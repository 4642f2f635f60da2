#pragma once

#include "slice4d/geom4.hpp"
#include "slice4d/multislice.hpp"
#include "slice4d/slicer.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slice4d {

inline constexpr std::string_view kSceneSchemaVersion = "1";

// Snapshot of a laid-out slice stack. The axes glyph (x red, y green,
// z blue) is fixed and written into every document.
struct SceneDoc {
  std::string schema_version{kSceneSchemaVersion};
  std::string polytope_name;
  Mat4d rotation = Mat4d::Identity();
  double alpha_step = 0.0;
  double beta_step = 0.0;
  SliceStackConfig stack;
  LayoutParams layout;
  std::vector<PlacedSlice> slices;
  ParallelCoords parallel_coords;

  friend bool operator==(const SceneDoc&, const SceneDoc&) = default;
};

/// Malformed document. `byte_offset` is set for syntax errors, `location`
/// (a JSON pointer) for structural ones.
class SceneFormatError : public std::runtime_error {
 public:
  SceneFormatError(const std::string& what, std::optional<std::size_t> byte_offset, std::string location)
      : std::runtime_error(what), byte_offset_(byte_offset), location_(std::move(location)) {}

  std::optional<std::size_t> byte_offset() const { return byte_offset_; }
  const std::string& location() const { return location_; }

 private:
  std::optional<std::size_t> byte_offset_;
  std::string location_;
};

class SchemaVersionError : public std::runtime_error {
 public:
  SchemaVersionError(std::string found, std::string supported)
      : std::runtime_error("unsupported schema_version \"" + found + "\" (supported: \"" + supported + "\")"),
        found_(std::move(found)),
        supported_(std::move(supported)) {}

  const std::string& found() const { return found_; }
  const std::string& supported() const { return supported_; }

 private:
  std::string found_;
  std::string supported_;
};

/// Compact JSON with sorted keys; every floating-point value is printed with
/// 17 significant digits and always carries a '.' or exponent.
std::string canonical_dump(const nlohmann::json& value);

nlohmann::json scene_to_json(const SceneDoc& scene);
SceneDoc scene_from_json(const nlohmann::json& doc);

/// Canonical document followed by a newline. Identical snapshots give
/// identical bytes.
std::string write_scene(const SceneDoc& scene);
SceneDoc read_scene(std::string_view bytes);

/// Wavefront OBJ text for one slice in world coordinates; nullopt for an
/// empty slice.
std::optional<std::string> export_mesh(const SliceMesh& mesh, const SlicePlacement& placement,
                                       const Mat4d& rotation);

}  // namespace slice4d
