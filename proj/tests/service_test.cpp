#include "slice4d/service.hpp"

#include "test_support.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>

#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>

namespace slice4d {
namespace {

using nlohmann::json;
using std::numbers::pi;

// Scripted peer: hands out queued frames, then reports the close.
class FakeChannel : public MessageChannel {
 public:
  explicit FakeChannel(std::vector<std::string> inbound) : inbound_(inbound.begin(), inbound.end()) {}

  std::optional<std::string> receive() override {
    if (inbound_.empty()) return std::nullopt;
    auto f = inbound_.front();
    inbound_.pop_front();
    return f;
  }
  void send(const std::string& frame) override { sent.push_back(json::parse(frame)); }

  std::vector<json> sent;

 private:
  std::deque<std::string> inbound_;
};

std::string key_frame(char key) { return json{{"type", "key"}, {"key", std::string(1, key)}}.dump(); }

Mat4d rotation_of(const json& frame) {
  Mat4d m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = frame["scene"]["rotation"][i].get<double>();
  return m;
}

TEST(ServiceTest, InitialSceneOnConnect) {
  FakeChannel ch({});
  serve(SessionState::fresh(SessionConfig{}), ch);
  ASSERT_EQ(ch.sent.size(), 1u);
  EXPECT_EQ(ch.sent[0]["type"], "scene");
  EXPECT_EQ(ch.sent[0]["seq"], 0);
  EXPECT_EQ(ch.sent[0]["scene"]["schema_version"], "1");
  EXPECT_EQ(rotation_of(ch.sent[0]), Mat4d::Identity());
}

TEST(ServiceTest, KeyFrameRotatesOnce) {
  auto start = SessionState::fresh(SessionConfig{});
  start = step(std::move(start), cmd::SimpleRotate{RotationPlane::yz}).state;
  const Mat4d prev = start.rotation().matrix();
  FakeChannel ch({key_frame('2')});
  serve(start, ch);
  ASSERT_EQ(ch.sent.size(), 2u);
  EXPECT_EQ(ch.sent[1]["seq"], 1);
  const Mat4d want = testing::plane_rotation_matrix(0, 1, pi / 8) * prev;
  EXPECT_LT((rotation_of(ch.sent[1]) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ServiceTest, SceneFrameMatchesSceneDocument) {
  const auto s = SessionState::fresh(SessionConfig{});
  const auto frame = json::parse(scene_frame(s, 4));
  EXPECT_EQ(frame["seq"], 4);
  EXPECT_EQ(read_scene(frame["scene"].dump()), make_scene(s));
}

TEST(ServiceTest, MalformedFrameKeepsSessionAlive) {
  FakeChannel ch({"{{{", key_frame('6'), R"({"type":"jump"})", R"({"type":"key","key":"66"})", key_frame('6')});
  const auto final_state = serve(SessionState::fresh(SessionConfig{}), ch);
  ASSERT_EQ(ch.sent.size(), 6u);
  EXPECT_EQ(ch.sent[1]["type"], "error");
  EXPECT_NE(ch.sent[1]["message"].get<std::string>().find("byte"), std::string::npos);
  EXPECT_EQ(ch.sent[2]["type"], "scene");
  EXPECT_EQ(ch.sent[3]["type"], "error");
  EXPECT_EQ(ch.sent[4]["type"], "error");
  EXPECT_EQ(ch.sent[5]["type"], "scene");
  EXPECT_EQ(ch.sent[5]["seq"], 2);
  EXPECT_EQ(final_state.command_log().size(), 2u);
}

TEST(ServiceTest, UnboundKeySendsNothing) {
  FakeChannel ch({key_frame('q'), key_frame('0')});
  const auto s = serve(SessionState::fresh(SessionConfig{}), ch);
  EXPECT_EQ(ch.sent.size(), 1u);
  EXPECT_TRUE(s.command_log().empty());
}

TEST(ServiceTest, SetPolytopeFrame) {
  FakeChannel ch({R"({"type":"set","field":"polytope","value":"hypercube"})",
                  R"({"type":"set","field":"polytope","value":"24-cell"})",
                  R"({"type":"set","field":"delta_w","value":0.5})"});
  serve(SessionState::fresh(SessionConfig{}), ch);
  ASSERT_EQ(ch.sent.size(), 4u);
  EXPECT_EQ(ch.sent[1]["scene"]["polytope_name"], "hypercube");
  EXPECT_EQ(ch.sent[1]["scene"]["parallel_coords"]["vertices"].size(), 16u);
  EXPECT_EQ(ch.sent[2]["type"], "error");
  EXPECT_EQ(ch.sent[3]["type"], "error");
}

TEST(ServiceTest, SequenceFollowsArrivalOrder) {
  std::vector<std::string> frames;
  const std::string keys = "2lkuh6ij";
  for (char k : keys) frames.push_back(key_frame(k));
  FakeChannel ch(frames);
  auto expected = SessionState::fresh(SessionConfig{});
  serve(expected, ch);
  ASSERT_EQ(ch.sent.size(), keys.size() + 1);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    expected = step(std::move(expected), *keymap(keys[i])).state;
    EXPECT_EQ(ch.sent[i + 1]["seq"], i + 1);
    EXPECT_EQ(ch.sent[i + 1].dump(), json::parse(scene_frame(expected, i + 1)).dump());
  }
}

TEST(ServiceTest, LogWrittenOnClose) {
  const auto path = std::filesystem::temp_directory_path() / "slice4d_service_test.log";
  std::filesystem::remove(path);
  FakeChannel ch({key_frame('6'), key_frame('l'), key_frame('i')});
  ServeOptions options;
  options.log_path = path;
  const auto s = serve(SessionState::fresh(SessionConfig{}), ch, options);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(parse_command_log(text.str()), s.command_log());
  const auto replayed = replay(SessionConfig{}, parse_command_log(text.str()));
  EXPECT_EQ(write_scene(make_scene(replayed)), write_scene(make_scene(s)));
  std::filesystem::remove(path);
}

TEST(ServiceTest, CustomKeymapApplies) {
  FakeChannel ch({key_frame('6'), key_frame('w')});
  ServeOptions options;
  options.keys = Keymap::defaults().with_overrides("6 none\nw simple yw\n");
  const auto s = serve(SessionState::fresh(SessionConfig{}), ch, options);
  EXPECT_EQ(ch.sent.size(), 2u);
  EXPECT_EQ(s.command_log(), std::vector<Command>{cmd::SimpleRotate{RotationPlane::yw}});
}

TEST(WebSocketTest, RoundTripOverLoopback) {
  namespace beast = boost::beast;
  namespace websocket = beast::websocket;
  using tcp = boost::asio::ip::tcp;

  const auto log_dir = std::filesystem::temp_directory_path() / "slice4d_ws_test";
  std::filesystem::remove_all(log_dir);
  std::filesystem::create_directories(log_dir);

  std::optional<SessionServer> server;
  server.emplace(SessionConfig{}, Keymap::defaults(), log_dir, 0);
  std::thread runner([&] { server->run(); });

  {
    boost::asio::io_context io;
    websocket::stream<tcp::socket> ws(io);
    ws.next_layer().connect(tcp::endpoint(boost::asio::ip::make_address("127.0.0.1"), server->port()));
    ws.handshake("127.0.0.1", "/");
    auto read = [&] {
      beast::flat_buffer buf;
      ws.read(buf);
      return json::parse(beast::buffers_to_string(buf.data()));
    };
    EXPECT_EQ(read()["seq"], 0);
    ws.text(true);
    ws.write(boost::asio::buffer(key_frame('6')));
    const auto frame = read();
    EXPECT_EQ(frame["type"], "scene");
    EXPECT_EQ(frame["seq"], 1);
    ws.write(boost::asio::buffer(std::string("nope")));
    EXPECT_EQ(read()["type"], "error");
    ws.close(websocket::close_code::normal);
  }

  server->stop();
  runner.join();
  // Destruction joins the session thread, which writes its log.
  server.reset();

  std::ifstream in(log_dir / "session-0.log");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(parse_command_log(text.str()), std::vector<Command>{cmd::SimpleRotate{RotationPlane::yw}});
  std::filesystem::remove_all(log_dir);
}

}  // namespace
}  // namespace slice4d
