#pragma once

#include "slice4d/session.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace slice4d {

// Ordered, bidirectional channel of UTF-8 text frames.
class MessageChannel {
 public:
  virtual ~MessageChannel() = default;
  /// Blocks for the next inbound frame; nullopt once the peer has closed.
  virtual std::optional<std::string> receive() = 0;
  virtual void send(const std::string& frame) = 0;
};

// Inbound frames:
//   {"type":"key","key":"2"}
//   {"type":"set","field":"polytope","value":"hypercube"}
// Outbound frames:
//   {"type":"scene","seq":N,"scene":{...SceneDoc...}}
//   {"type":"error","message":"..."}
std::string scene_frame(const SessionState& state, std::uint64_t seq);
std::string error_frame(const std::string& message);

struct ServeOptions {
  Keymap keys = Keymap::defaults();
  /// Command log written here when the channel closes.
  std::optional<std::filesystem::path> log_path;
};

/// Runs one session over `channel` until it closes: sends the initial scene,
/// then one scene frame per state-changing frame, strictly in arrival order.
/// Unbound keys change nothing and produce no frame. Returns the final state.
SessionState serve(SessionState state, MessageChannel& channel, const ServeOptions& options = {});

// WebSocket endpoint; every connection gets its own fresh session.
class SessionServer {
 public:
  SessionServer(SessionConfig config, Keymap keys, std::optional<std::filesystem::path> log_dir,
                std::uint16_t port, const std::string& address = "127.0.0.1");
  ~SessionServer();

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  std::uint16_t port() const;

  /// Accepts connections until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace slice4d
