#pragma once

#include "slice4d/geom4.hpp"
#include "slice4d/multislice.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/scene_io.hpp"
#include "slice4d/slicer.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace slice4d {

inline constexpr double kAngleIncrement = std::numbers::pi / 64.0;
inline constexpr double kAlphaMin = -std::numbers::pi / 2.0;
inline constexpr double kAlphaMax = std::numbers::pi / 2.0;
inline constexpr double kDefaultAlpha = std::numbers::pi / 8.0;
inline const double kDefaultBeta = std::numbers::pi / std::sqrt(3.0) - std::numbers::pi / 8.0;

namespace cmd {
struct SimpleRotate {
  RotationPlane plane;
  friend bool operator==(const SimpleRotate&, const SimpleRotate&) = default;
};
struct DoubleRotate {
  PlanePair pair;
  friend bool operator==(const DoubleRotate&, const DoubleRotate&) = default;
};
struct IncAngle {
  friend bool operator==(const IncAngle&, const IncAngle&) = default;
};
struct DecAngle {
  friend bool operator==(const DecAngle&, const DecAngle&) = default;
};
struct FocusRight {
  friend bool operator==(const FocusRight&, const FocusRight&) = default;
};
struct FocusLeft {
  friend bool operator==(const FocusLeft&, const FocusLeft&) = default;
};
struct Reset {
  friend bool operator==(const Reset&, const Reset&) = default;
};
struct SetPolytope {
  std::string name;
  friend bool operator==(const SetPolytope&, const SetPolytope&) = default;
};
}  // namespace cmd

using Command = std::variant<cmd::SimpleRotate, cmd::DoubleRotate, cmd::IncAngle, cmd::DecAngle, cmd::FocusRight,
                             cmd::FocusLeft, cmd::Reset, cmd::SetPolytope>;

// Text form, e.g. "simple yw", "double xw,yz", "inc_angle", "polytope hypercube".
std::string to_string(const Command& command);
std::optional<Command> parse_command(std::string_view text);

// Key bindings. The defaults are
//   '1'..'6'  simple rotation in zw, xy, xz, xw, yz, yw
//   'y' 'u' 'i'  double rotation in (xy,zw), (xz,yw), (xw,yz)
//   'k' / 'j'  increase / decrease the rotation angle
//   'l' / 'h'  move the focus slice right / left
//   'r'  reset
class Keymap {
 public:
  static Keymap defaults();

  /// Applies overrides from text: one "<key> <command>" per line, '#'
  /// comments, "<key> none" unbinds. Throws std::invalid_argument naming
  /// the offending line.
  Keymap with_overrides(std::string_view text) const;

  std::optional<Command> lookup(char key) const;
  const std::map<char, Command>& bindings() const { return bindings_; }

 private:
  std::map<char, Command> bindings_;
};

/// Default-keymap lookup; unbound keys give nullopt.
std::optional<Command> keymap(char key);

struct SessionConfig {
  std::string polytope = "pentachoron";
  double edge_length = 2.0;
  SliceStackConfig stack;
  LayoutParams layout;
  double alpha_step = kDefaultAlpha;
  double beta_step = kDefaultBeta;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

/// Empty when valid, otherwise a description of the first problem.
std::optional<std::string> check_session_config(const SessionConfig& config);

// The rotation angle is the configured alpha plus a whole number of
// increments, clamped to [kAlphaMin, kAlphaMax].
class SessionState {
 public:
  /// Throws std::invalid_argument on an invalid config.
  static SessionState fresh(const SessionConfig& config);

  const SessionConfig& config() const { return config_; }
  const Polytope4& polytope() const { return *polytope_; }
  const SliceTopology& topology() const { return *topology_; }
  const Rotation4d& rotation() const { return rotation_; }
  double alpha_step() const;
  double beta_step() const { return config_.beta_step; }
  int angle_steps() const { return angle_steps_; }
  const SliceStackConfig& stack() const { return stack_; }
  const LayoutParams& layout() const { return layout_; }
  const std::vector<Command>& command_log() const { return command_log_; }

  friend struct StepAccess;

 private:
  SessionConfig config_;
  std::shared_ptr<const Polytope4> polytope_;
  std::shared_ptr<const SliceTopology> topology_;
  Rotation4d rotation_;
  int angle_steps_ = 0;
  SliceStackConfig stack_;
  LayoutParams layout_;
  std::vector<Command> command_log_;
};

enum class Change { rotation, angle, focus, polytope, reset };

struct ChangeEvent {
  Change change;
  std::string description;
};

struct StepResult {
  SessionState state;
  ChangeEvent event;
};

StepResult step(SessionState state, const Command& command);

struct ScriptResult {
  SessionState state;
  int applied = 0;
  int unknown_keys = 0;
};

/// Key characters of a script, in order. Lines whose first non-blank
/// character is '#' are comments; every other non-blank character is a key.
std::string script_keys(std::span<const std::string> lines);

/// Folds every script key through the keymap and step().
ScriptResult run_script(SessionState state, std::span<const std::string> lines,
                        const Keymap& keys = Keymap::defaults());

std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// A fresh session from `config` with every command of `log` applied.
SessionState replay(const SessionConfig& config, std::span<const Command> log);

SceneDoc make_scene(const SessionState& state);

/// Command log as text, one command per line, readable by parse_command.
std::string format_command_log(std::span<const Command> log);
std::vector<Command> parse_command_log(std::string_view text);

}  // namespace slice4d
