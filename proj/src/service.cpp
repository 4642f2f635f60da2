#include "slice4d/service.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <fstream>
#include <iostream>

namespace slice4d {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

// Interprets one inbound frame; an error message or the command to apply
// (nullopt command with no error means "no-op").
struct Decoded {
  std::optional<Command> command;
  std::optional<std::string> error;
};

Decoded decode_frame(const std::string& frame, const Keymap& keys) {
  json msg;
  try {
    msg = json::parse(frame);
  } catch (const json::parse_error& e) {
    return {std::nullopt, "malformed frame at byte " + std::to_string(e.byte)};
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    return {std::nullopt, "frame has no string \"type\""};
  const auto type = msg["type"].get<std::string>();
  if (type == "key") {
    if (!msg.contains("key") || !msg["key"].is_string() || msg["key"].get<std::string>().size() != 1)
      return {std::nullopt, "key frame needs a one-character \"key\""};
    return {keys.lookup(msg["key"].get<std::string>()[0]), std::nullopt};
  }
  if (type == "set") {
    if (!msg.contains("field") || !msg["field"].is_string()) return {std::nullopt, "set frame needs \"field\""};
    const auto field = msg["field"].get<std::string>();
    if (field != "polytope") return {std::nullopt, "unsupported set field \"" + field + "\""};
    if (!msg.contains("value") || !msg["value"].is_string()) return {std::nullopt, "set polytope needs a string value"};
    auto command = parse_command("polytope " + msg["value"].get<std::string>());
    if (!command) return {std::nullopt, "unknown polytope \"" + msg["value"].get<std::string>() + "\""};
    return {std::move(command), std::nullopt};
  }
  return {std::nullopt, "unknown frame type \"" + type + "\""};
}

class WebSocketChannel : public MessageChannel {
 public:
  explicit WebSocketChannel(websocket::stream<tcp::socket>& ws) : ws_(ws) {}

  std::optional<std::string> receive() override {
    beast::flat_buffer buffer;
    beast::error_code ec;
    ws_.read(buffer, ec);
    if (ec) return std::nullopt;
    return beast::buffers_to_string(buffer.data());
  }

  void send(const std::string& frame) override {
    ws_.text(true);
    beast::error_code ec;
    ws_.write(asio::buffer(frame), ec);
  }

 private:
  websocket::stream<tcp::socket>& ws_;
};

}  // namespace

std::string scene_frame(const SessionState& state, std::uint64_t seq) {
  return canonical_dump(json{{"type", "scene"}, {"seq", seq}, {"scene", scene_to_json(make_scene(state))}});
}

std::string error_frame(const std::string& message) {
  return canonical_dump(json{{"type", "error"}, {"message", message}});
}

SessionState serve(SessionState state, MessageChannel& channel, const ServeOptions& options) {
  std::uint64_t seq = 0;
  channel.send(scene_frame(state, seq++));
  while (auto frame = channel.receive()) {
    const Decoded decoded = decode_frame(*frame, options.keys);
    if (decoded.error) {
      channel.send(error_frame(*decoded.error));
      continue;
    }
    if (!decoded.command) continue;
    try {
      state = step(std::move(state), *decoded.command).state;
      channel.send(scene_frame(state, seq++));
    } catch (const std::exception& e) {
      channel.send(error_frame(e.what()));
    }
  }
  if (options.log_path) {
    std::ofstream out(*options.log_path, std::ios::binary);
    out << format_command_log(state.command_log());
  }
  return state;
}

struct SessionServer::Impl {
  SessionConfig config;
  Keymap keys;
  std::optional<std::filesystem::path> log_dir;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::atomic<bool> stopping{false};
  std::mutex mutex;
  std::vector<std::thread> sessions;
  std::uint64_t session_count = 0;

  void run_session(tcp::socket socket, std::uint64_t id) {
    try {
      websocket::stream<tcp::socket> ws(std::move(socket));
      ws.accept();
      WebSocketChannel channel(ws);
      ServeOptions options{keys, std::nullopt};
      if (log_dir) options.log_path = *log_dir / ("session-" + std::to_string(id) + ".log");
      serve(SessionState::fresh(config), channel, options);
      beast::error_code ec;
      ws.close(websocket::close_code::normal, ec);
    } catch (const std::exception& e) {
      std::cerr << "session " << id << ": " << e.what() << "\n";
    }
  }
};

SessionServer::SessionServer(SessionConfig config, Keymap keys, std::optional<std::filesystem::path> log_dir,
                             std::uint16_t port, const std::string& address)
    : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->keys = std::move(keys);
  impl_->log_dir = std::move(log_dir);
  const tcp::endpoint endpoint(asio::ip::make_address(address), port);
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen();
}

SessionServer::~SessionServer() {
  stop();
  std::lock_guard lock(impl_->mutex);
  for (auto& t : impl_->sessions)
    if (t.joinable()) t.join();
}

std::uint16_t SessionServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void SessionServer::run() {
  while (!impl_->stopping) {
    tcp::socket socket(impl_->io);
    beast::error_code ec;
    impl_->acceptor.accept(socket, ec);
    if (impl_->stopping) break;
    if (ec) continue;
    std::lock_guard lock(impl_->mutex);
    const auto id = impl_->session_count++;
    impl_->sessions.emplace_back([this, s = std::move(socket), id]() mutable { impl_->run_session(std::move(s), id); });
  }
}

void SessionServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  // Wake a blocked accept().
  beast::error_code ec;
  tcp::socket poke(impl_->io);
  poke.connect(impl_->acceptor.local_endpoint(), ec);
}

}  // namespace slice4d
