#include "slice4d/cli.hpp"
#include "slice4d/scene_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace slice4d {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slice4d");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("slice4d_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  const std::string data_ = SLICE4D_TEST_DATA;
};

TEST_F(CliTest, ExportWritesCentreTetrahedron) {
  const auto r = cli({"export", "--out", (dir_ / "s.scene").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto scene = read_scene(slurp(dir_ / "s.scene"));
  ASSERT_EQ(scene.slices.size(), 13u);
  const auto& centre = scene.slices[6].mesh;
  EXPECT_EQ(centre.points.size(), 4u);
  EXPECT_EQ(centre.segments.size(), 6u);
  EXPECT_EQ(centre.polygons.size(), 4u);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      EXPECT_NEAR((centre.points[a].pos3 - centre.points[b].pos3).norm(), 1.6, 1e-9);
}

TEST_F(CliTest, ExportToStdoutMatchesFile) {
  const auto a = cli({"export"});
  const auto b = cli({"export", "--out", (dir_ / "s.scene").string()});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a.out, slurp(dir_ / "s.scene"));
}

TEST_F(CliTest, ExportHonoursSessionFlags) {
  const auto r = cli({"export", "--polytope", "hypercube", "--slices", "5", "--delta-w", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto scene = read_scene(r.out);
  EXPECT_EQ(scene.polytope_name, "hypercube");
  EXPECT_EQ(scene.slices.size(), 5u);
  EXPECT_EQ(scene.slices.back().placement.w_value, 1.0);
}

TEST_F(CliTest, AnimateWritesOneFramePerKey) {
  const auto r = cli({"animate", "--seed-script", data_ + "/half_turn_yw.keys", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int frames = 0;
  for (const auto& e : fs::directory_iterator(dir_)) frames += e.path().extension() == ".scene";
  EXPECT_EQ(frames, 9);
  const auto last = read_scene(slurp(dir_ / "frame_0008.scene"));
  EXPECT_LT((last.rotation - testing::plane_rotation_matrix(1, 3, M_PI)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(slurp(dir_ / "frame_0008.scene"), slurp(data_ + "/half_turn_yw.scene"));
  EXPECT_EQ(slurp(dir_ / "frame_0000.scene"), slurp(data_ + "/initial_pentachoron.scene"));
}

TEST_F(CliTest, ObjExport) {
  const auto r = cli({"export", "--format", "obj", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "slice_0.obj"));
  // Slices beyond the w extent are empty and get no file.
  EXPECT_FALSE(fs::exists(dir_ / "slice_6.obj"));
  EXPECT_FALSE(fs::exists(dir_ / "slice_-6.obj"));
  const auto one = cli({"export", "--format", "obj", "--slice", "0", "--out", (dir_ / "one").string()});
  ASSERT_EQ(one.code, 0);
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir_ / "one")) ++files;
  EXPECT_EQ(files, 1);
  EXPECT_EQ(slurp(dir_ / "one" / "slice_0.obj"), slurp(dir_ / "slice_0.obj"));
  EXPECT_EQ(cli({"export", "--format", "obj", "--slice", "40", "--out", dir_.string()}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({"export", "--slices", "4"}).code, 2);
  EXPECT_EQ(cli({"export", "--delta-w", "0"}).code, 2);
  EXPECT_EQ(cli({"export", "--polytope", "cube"}).code, 2);
  EXPECT_EQ(cli({"export", "--bogus"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"animate"}).code, 2);
  EXPECT_EQ(cli({"export", "--seed-script", (dir_ / "missing.keys").string()}).code, 2);
  const auto r = cli({"export", "--slices", "4"});
  EXPECT_NE(r.err.find("odd"), std::string::npos) << r.err;
}

TEST_F(CliTest, KeymapFile) {
  {
    std::ofstream(dir_ / "keys.map") << "w simple yw\n";
    std::ofstream(dir_ / "s.keys") << "wwwwwwww\n";
  }
  const auto r = cli({"export", "--keymap", (dir_ / "keys.map").string(), "--seed-script", (dir_ / "s.keys").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(data_ + "/half_turn_yw.scene"));
  std::ofstream(dir_ / "bad.map") << "w spin\n";
  EXPECT_EQ(cli({"export", "--keymap", (dir_ / "bad.map").string()}).code, 2);
}

TEST_F(CliTest, Validate) {
  const auto r = cli({"validate"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pentachoron: ok"), std::string::npos);
  EXPECT_EQ(cli({"validate", "--polytope", "hypercube"}).code, 0);
  EXPECT_EQ(cli({"validate", "--edge-length", "-1"}).code, 2);
}

}  // namespace
}  // namespace slice4d
