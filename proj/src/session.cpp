#include "slice4d/session.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slice4d {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_comment_or_blank(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

// Range of angle step counts keeping alpha inside [kAlphaMin, kAlphaMax].
std::pair<int, int> angle_step_range(double base) {
  const int lo = static_cast<int>(std::ceil((kAlphaMin - base) / kAngleIncrement - 1e-9));
  const int hi = static_cast<int>(std::floor((kAlphaMax - base) / kAngleIncrement + 1e-9));
  return {lo, hi};
}

}  // namespace

struct StepAccess {
  static Rotation4d& rotation(SessionState& s) { return s.rotation_; }
  static int& angle_steps(SessionState& s) { return s.angle_steps_; }
  static SliceStackConfig& stack(SessionState& s) { return s.stack_; }
  static std::vector<Command>& log(SessionState& s) { return s.command_log_; }
  static void set_polytope(SessionState& s, const std::string& name) {
    auto p = std::make_shared<const Polytope4>(make_polytope(name, s.config_.edge_length));
    s.topology_ = std::make_shared<const SliceTopology>(make_slice_topology(*p));
    s.polytope_ = std::move(p);
  }
  static void reset(SessionState& s) {
    auto log = std::move(s.command_log_);
    s = SessionState::fresh(s.config_);
    s.command_log_ = std::move(log);
  }
};

std::string to_string(const Command& command) {
  return std::visit(overloaded{
                        [](const cmd::SimpleRotate& c) { return "simple " + std::string(to_string(c.plane)); },
                        [](const cmd::DoubleRotate& c) { return "double " + to_string(c.pair); },
                        [](const cmd::IncAngle&) { return std::string("inc_angle"); },
                        [](const cmd::DecAngle&) { return std::string("dec_angle"); },
                        [](const cmd::FocusRight&) { return std::string("focus_right"); },
                        [](const cmd::FocusLeft&) { return std::string("focus_left"); },
                        [](const cmd::Reset&) { return std::string("reset"); },
                        [](const cmd::SetPolytope& c) { return "polytope " + c.name; },
                    },
                    command);
}

std::optional<Command> parse_command(std::string_view text) {
  text = trim(text);
  const auto space = text.find(' ');
  const auto verb = text.substr(0, space);
  const auto arg = space == std::string_view::npos ? std::string_view{} : trim(text.substr(space + 1));
  if (verb == "simple") {
    if (auto p = parse_plane(arg)) return cmd::SimpleRotate{*p};
    return std::nullopt;
  }
  if (verb == "double") {
    if (auto p = parse_plane_pair(arg)) return cmd::DoubleRotate{*p};
    return std::nullopt;
  }
  if (verb == "polytope") {
    if (arg == "pentachoron" || arg == "hypercube") return cmd::SetPolytope{std::string(arg)};
    return std::nullopt;
  }
  if (!arg.empty()) return std::nullopt;
  if (verb == "inc_angle") return cmd::IncAngle{};
  if (verb == "dec_angle") return cmd::DecAngle{};
  if (verb == "focus_right") return cmd::FocusRight{};
  if (verb == "focus_left") return cmd::FocusLeft{};
  if (verb == "reset") return cmd::Reset{};
  return std::nullopt;
}

Keymap Keymap::defaults() {
  Keymap k;
  const std::array<RotationPlane, 6> digit_planes = {RotationPlane::zw, RotationPlane::xy, RotationPlane::xz,
                                                     RotationPlane::xw, RotationPlane::yz, RotationPlane::yw};
  for (int i = 0; i < 6; ++i) k.bindings_[static_cast<char>('1' + i)] = cmd::SimpleRotate{digit_planes[i]};
  k.bindings_['y'] = cmd::DoubleRotate{kPairXyZw};
  k.bindings_['u'] = cmd::DoubleRotate{kPairXzYw};
  k.bindings_['i'] = cmd::DoubleRotate{kPairXwYz};
  k.bindings_['k'] = cmd::IncAngle{};
  k.bindings_['j'] = cmd::DecAngle{};
  k.bindings_['l'] = cmd::FocusRight{};
  k.bindings_['h'] = cmd::FocusLeft{};
  k.bindings_['r'] = cmd::Reset{};
  return k;
}

Keymap Keymap::with_overrides(std::string_view text) const {
  Keymap out = *this;
  int line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    const auto t = trim(line);
    if (t.size() < 3 || (t[1] != ' ' && t[1] != '\t'))
      throw std::invalid_argument("keymap line " + std::to_string(line_no) + ": expected \"<key> <command>\"");
    const char key = t[0];
    const auto rest = trim(t.substr(1));
    if (rest == "none") {
      out.bindings_.erase(key);
      continue;
    }
    auto command = parse_command(rest);
    if (!command)
      throw std::invalid_argument("keymap line " + std::to_string(line_no) + ": unknown command \"" +
                                  std::string(rest) + "\"");
    out.bindings_[key] = std::move(*command);
  }
  return out;
}

std::optional<Command> Keymap::lookup(char key) const {
  const auto it = bindings_.find(key);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

std::optional<Command> keymap(char key) {
  static const Keymap k = Keymap::defaults();
  return k.lookup(key);
}

std::optional<std::string> check_session_config(const SessionConfig& config) {
  if (config.polytope != "pentachoron" && config.polytope != "hypercube")
    return "unknown polytope \"" + config.polytope + "\"";
  if (!(config.edge_length > 0.0) || !std::isfinite(config.edge_length)) return "edge length must be positive";
  if (auto bad = check_config(config.stack)) return bad;
  if (auto bad = check_layout(config.layout)) return bad;
  if (!(config.alpha_step >= kAlphaMin && config.alpha_step <= kAlphaMax))
    return "alpha must lie in [-pi/2, pi/2]";
  if (!std::isfinite(config.beta_step)) return "beta must be finite";
  return std::nullopt;
}

SessionState SessionState::fresh(const SessionConfig& config) {
  if (auto bad = check_session_config(config)) throw std::invalid_argument(*bad);
  SessionState s;
  s.config_ = config;
  s.stack_ = config.stack;
  s.layout_ = config.layout;
  StepAccess::set_polytope(s, config.polytope);
  return s;
}

double SessionState::alpha_step() const {
  return std::clamp(config_.alpha_step + angle_steps_ * kAngleIncrement, kAlphaMin, kAlphaMax);
}

StepResult step(SessionState state, const Command& command) {
  using A = StepAccess;
  ChangeEvent event = std::visit(
      overloaded{
          [&](const cmd::SimpleRotate& c) {
            A::rotation(state) = compose(rotation_simple(c.plane, state.alpha_step()), state.rotation());
            return ChangeEvent{Change::rotation, "simple rotation in " + std::string(to_string(c.plane))};
          },
          [&](const cmd::DoubleRotate& c) {
            A::rotation(state) =
                compose(rotation_double(c.pair, state.alpha_step(), state.beta_step()), state.rotation());
            return ChangeEvent{Change::rotation, "double rotation in " + to_string(c.pair)};
          },
          [&](const cmd::IncAngle&) {
            const auto [lo, hi] = angle_step_range(state.config().alpha_step);
            A::angle_steps(state) = std::min(state.angle_steps() + 1, hi);
            return ChangeEvent{Change::angle, "alpha increased"};
          },
          [&](const cmd::DecAngle&) {
            const auto [lo, hi] = angle_step_range(state.config().alpha_step);
            A::angle_steps(state) = std::max(state.angle_steps() - 1, lo);
            return ChangeEvent{Change::angle, "alpha decreased"};
          },
          [&](const cmd::FocusRight&) {
            A::stack(state) = shift_focus(state.stack(), FocusDirection::right);
            return ChangeEvent{Change::focus, "focus moved right"};
          },
          [&](const cmd::FocusLeft&) {
            A::stack(state) = shift_focus(state.stack(), FocusDirection::left);
            return ChangeEvent{Change::focus, "focus moved left"};
          },
          [&](const cmd::Reset&) {
            A::reset(state);
            return ChangeEvent{Change::reset, "reset"};
          },
          [&](const cmd::SetPolytope& c) {
            A::set_polytope(state, c.name);
            return ChangeEvent{Change::polytope, "polytope " + c.name};
          },
      },
      command);
  A::log(state).push_back(command);
  return {std::move(state), std::move(event)};
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return split_lines(buf.str());
}

std::string script_keys(std::span<const std::string> lines) {
  std::string keys;
  for (const auto& line : lines) {
    if (is_comment_or_blank(line)) continue;
    for (char key : line)
      if (key != ' ' && key != '\t' && key != '\r') keys += key;
  }
  return keys;
}

ScriptResult run_script(SessionState state, std::span<const std::string> lines, const Keymap& keys) {
  ScriptResult result{std::move(state), 0, 0};
  for (char key : script_keys(lines)) {
    auto command = keys.lookup(key);
    if (!command) {
      ++result.unknown_keys;
      continue;
    }
    result.state = step(std::move(result.state), *command).state;
    ++result.applied;
  }
  return result;
}

SessionState replay(const SessionConfig& config, std::span<const Command> log) {
  SessionState state = SessionState::fresh(config);
  for (const auto& command : log) state = step(std::move(state), command).state;
  return state;
}

SceneDoc make_scene(const SessionState& state) {
  const auto positions = rotated_positions(state.polytope(), state.rotation());
  SceneDoc scene;
  scene.polytope_name = state.polytope().name;
  scene.rotation = state.rotation().matrix();
  scene.alpha_step = state.alpha_step();
  scene.beta_step = state.beta_step();
  scene.stack = state.stack();
  scene.layout = state.layout();
  scene.slices = build_stack(state.topology(), positions, state.stack(), state.layout());
  scene.parallel_coords = parallel_coords(positions);
  return scene;
}

std::string format_command_log(std::span<const Command> log) {
  std::string out = "# slice4d command log\n";
  for (const auto& command : log) {
    out += to_string(command);
    out += '\n';
  }
  return out;
}

std::vector<Command> parse_command_log(std::string_view text) {
  std::vector<Command> log;
  int line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto command = parse_command(line);
    if (!command) throw std::invalid_argument("command log line " + std::to_string(line_no) + ": \"" + line + "\"");
    log.push_back(std::move(*command));
  }
  return log;
}

}  // namespace slice4d
