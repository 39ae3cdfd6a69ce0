#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdl/runner.hpp"

namespace fs = std::filesystem;
using hdl::cli::RunOptions;
using hdl::cli::run;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hdl_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunOptions options(const std::string& command, const fs::path& out) {
  RunOptions o;
  o.command = command;
  o.out_dir = out.string();
  o.constants_path = HDL_TEST_CONSTANTS;
  return o;
}

}  // namespace

TEST(Cli, DecomposeDefaultTelescopes) {
  const auto dir = fresh_dir("decompose");
  const auto r = run(options("decompose", dir));
  ASSERT_EQ(r.exit_code, 0) << r.message;
  const auto report = nlohmann::json::parse(slurp(dir / "decompose.json"));
  EXPECT_TRUE(fs::exists(dir / "decompose.csv"));
  EXPECT_EQ(report.at("provenance").at("config_digest").get<std::string>().size(), 64u);
  bool telescoping = false;
  for (const auto& inv : report.at("invariants")) {
    if (inv.at("name") == "telescoping_identity") {
      telescoping = true;
      EXPECT_TRUE(inv.at("pass").get<bool>());
    }
  }
  EXPECT_TRUE(telescoping);
}

TEST(Cli, InvalidEpsilonIsRejected) {
  const auto dir = fresh_dir("bad_eps");
  auto o = options("decompose", dir);
  o.config = {{"decompose", {{"epsilon", 0.0}}}};
  const auto r = run(o);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.message.find("0 < epsilon <= 1"), std::string::npos) << r.message;
  EXPECT_FALSE(fs::exists(dir / "decompose.json"));
}

TEST(Cli, MismatchedCommandIsRejected) {
  const auto dir = fresh_dir("mismatch");
  auto o = options("decompose", dir);
  o.config = {{"command", "embed"}};
  EXPECT_EQ(run(o).exit_code, 2);
}

TEST(Cli, CacheHitReproducesBytes) {
  const auto dir = fresh_dir("cache");
  auto o = options("counterexample", dir);
  const auto first = run(o);
  ASSERT_EQ(first.exit_code, 0) << first.message;
  EXPECT_FALSE(first.cache_hit);
  const std::string bytes = slurp(dir / "counterexample.json");
  const auto second = run(o);
  ASSERT_EQ(second.exit_code, 0);
  EXPECT_TRUE(second.cache_hit);
  EXPECT_EQ(second.digest, first.digest);
  EXPECT_EQ(slurp(dir / "counterexample.json"), bytes);
  o.use_cache = false;
  const auto third = run(o);
  EXPECT_FALSE(third.cache_hit);
  EXPECT_EQ(slurp(dir / "counterexample.json"), bytes);
}

TEST(Cli, ThreadCountDoesNotChangeReports) {
  const auto one = fresh_dir("threads1");
  const auto three = fresh_dir("threads3");
  for (const std::string command : {"embed", "counting"}) {
    auto a = options(command, one);
    a.threads = 1;
    a.use_cache = false;
    auto b = options(command, three);
    b.threads = 3;
    b.use_cache = false;
    ASSERT_EQ(run(a).exit_code, 0) << command;
    ASSERT_EQ(run(b).exit_code, 0) << command;
    EXPECT_EQ(slurp(one / (command + ".json")), slurp(three / (command + ".json"))) << command;
  }
}

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(hdl::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
