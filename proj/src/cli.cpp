#include "slice4d/cli.hpp"

#include "slice4d/service.hpp"
#include "slice4d/session.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace slice4d {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  SessionConfig config;
  std::string seed_script;
  std::string keymap_file;
  std::string out;
  std::string format = "scene";
  std::optional<int> slice_index;
  int port = 8765;
};

void add_session_options(CLI::App& app, Options& o) {
  app.add_option("--polytope", o.config.polytope, "pentachoron or hypercube")
      ->check(CLI::IsMember({"pentachoron", "hypercube"}));
  app.add_option("--edge-length", o.config.edge_length, "edge length of the polytope");
  app.add_option("--delta-w", o.config.stack.delta_w, "spacing of the slicing hyperplanes");
  app.add_option("--slices", o.config.stack.count, "number of slices (odd)");
  app.add_option("--alpha", o.config.alpha_step, "rotation angle per key, radians");
  app.add_option("--beta", o.config.beta_step, "second angle of double rotations, radians");
  app.add_option("--spacing", o.config.layout.spacing, "distance between neighbouring slices");
  app.add_option("--curvature", o.config.layout.curvature, "parabola coefficient of the oval layout");
  app.add_option("--keymap", o.keymap_file, "key binding overrides");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Keymap load_keys(const Options& o) {
  if (o.keymap_file.empty()) return Keymap::defaults();
  try {
    return Keymap::defaults().with_overrides(slurp(o.keymap_file));
  } catch (const std::invalid_argument& e) {
    throw UsageError(o.keymap_file + ": " + e.what());
  }
}

SessionConfig checked_config(const Options& o) {
  if (auto bad = check_session_config(o.config)) throw UsageError(*bad);
  return o.config;
}

std::vector<std::string> script_lines(const Options& o) {
  if (o.seed_script.empty()) return {};
  return split_lines(slurp(o.seed_script));
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream& err) {
  const auto keys = load_keys(o);
  const auto result = run_script(SessionState::fresh(checked_config(o)), script_lines(o), keys);
  if (result.unknown_keys) err << "skipped " << result.unknown_keys << " unbound key(s)\n";
  const SceneDoc scene = make_scene(result.state);

  if (o.format == "scene") {
    if (o.out.empty()) {
      out << write_scene(scene);
    } else {
      write_file(o.out, write_scene(scene));
    }
    return 0;
  }

  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out);
  int written = 0;
  for (const auto& placed : scene.slices) {
    if (o.slice_index && placed.placement.slice_index != *o.slice_index) continue;
    const auto obj = export_mesh(placed.mesh, placed.placement, scene.rotation);
    if (!obj) {
      if (o.slice_index) err << "slice " << *o.slice_index << " is empty; nothing written\n";
      continue;
    }
    const auto path = dir / ("slice_" + std::to_string(placed.placement.slice_index) + ".obj");
    write_file(path, *obj);
    out << path.string() << "\n";
    ++written;
  }
  if (o.slice_index && written == 0 &&
      std::none_of(scene.slices.begin(), scene.slices.end(),
                   [&](const PlacedSlice& s) { return s.placement.slice_index == *o.slice_index; }))
    throw UsageError("no slice with index " + std::to_string(*o.slice_index));
  return 0;
}

int cmd_animate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto keys = load_keys(o);
  SessionState state = SessionState::fresh(checked_config(o));
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path("frames") : std::filesystem::path(o.out);
  int frame = 0;
  auto emit = [&] {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.scene", frame++);
    write_file(dir / name, write_scene(make_scene(state)));
  };
  emit();
  int unknown = 0;
  for (char key : script_keys(script_lines(o))) {
    auto command = keys.lookup(key);
    if (!command) {
      ++unknown;
      continue;
    }
    state = step(std::move(state), *command).state;
    emit();
  }
  if (unknown) err << "skipped " << unknown << " unbound key(s)\n";
  out << frame << " frame(s) written to " << dir.string() << "\n";
  return 0;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream&) {
  if (o.port < 0 || o.port > 65535) throw UsageError("port out of range");
  std::optional<std::filesystem::path> log_dir;
  if (!o.out.empty()) {
    log_dir = o.out;
    std::filesystem::create_directories(*log_dir);
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionServer server(checked_config(o), load_keys(o), log_dir, static_cast<std::uint16_t>(o.port), "0.0.0.0");
  out << "serving on ws://0.0.0.0:" << server.port() << "/\n" << std::flush;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto config = checked_config(o);
  const auto report = validate(make_polytope(config.polytope, config.edge_length));
  out << config.polytope << ": " << (report.ok ? "ok" : "FAILED") << "\n";
  for (const auto& f : report.failures) out << "  " << f.name << ": " << f.detail << "\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slices a rotating 4-D polytope with a stack of w = const hyperplanes."};
  app.require_subcommand(1);
  Options o;

  auto* exp = app.add_subcommand("export", "write the scene (or OBJ meshes) after a key script");
  add_session_options(*exp, o);
  exp->add_option("--seed-script", o.seed_script, "key script to run first");
  exp->add_option("--out", o.out, "output file (scene) or directory (obj)");
  exp->add_option("--format", o.format, "scene or obj")->check(CLI::IsMember({"scene", "obj"}));
  exp->add_option("--slice", o.slice_index, "only this slice index (obj)");

  auto* anim = app.add_subcommand("animate", "write one scene per key of a script");
  add_session_options(*anim, o);
  anim->add_option("--seed-script", o.seed_script, "key script")->required();
  anim->add_option("--out", o.out, "output directory");

  auto* srv = app.add_subcommand("serve", "run the WebSocket session service");
  add_session_options(*srv, o);
  srv->add_option("--port", o.port, "TCP port");
  srv->add_option("--out", o.out, "directory for session command logs");

  auto* val = app.add_subcommand("validate", "check the polytope's structure");
  val->add_option("--polytope", o.config.polytope, "pentachoron or hypercube")
      ->check(CLI::IsMember({"pentachoron", "hypercube"}));
  val->add_option("--edge-length", o.config.edge_length, "edge length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*exp) return cmd_export(o, out, err);
    if (*anim) return cmd_animate(o, out, err);
    if (*srv) return cmd_serve(o, out, err);
    if (*val) return cmd_validate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace slice4d
