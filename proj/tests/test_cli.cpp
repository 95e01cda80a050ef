#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vtl/cli.hpp"

using namespace vtl;
using namespace vtl::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("vtl_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
              ::testing::UnitTest::GetInstance()->current_test_info()->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ErrorKind parse_error(const std::vector<std::string>& args) {
  try {
    parse_config(args);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(ParseConfig, Examples) {
  const auto c = parse_config({"growth", "--group", "nil", "--rmax", "12"});
  EXPECT_EQ(c.command, "growth");
  EXPECT_EQ(c.group, GroupChoice::Nil);
  EXPECT_TRUE(c.gens.empty());
  EXPECT_EQ(c.rmax, 12U);
  EXPECT_EQ(parse_error({"growth", "--group", "custom", "--matrix", "1,1,0,2"}), ErrorKind::BadMatrix);
  EXPECT_EQ(parse_error({"growth", "--group", "custom"}), ErrorKind::MissingRequired);
  EXPECT_EQ(parse_error({"--group", "nil"}), ErrorKind::MissingRequired);
  EXPECT_EQ(parse_error({"growth", "--colour", "red"}), ErrorKind::UnknownKey);
  EXPECT_EQ(parse_error({"explode"}), ErrorKind::UnknownKey);
  EXPECT_EQ(parse_error({"growth", "--rmax", "ten"}), ErrorKind::BadValue);
}

TEST(ParseConfig, FlagsOverrideConfigFile) {
  const auto dir = temp_dir();
  const auto path = dir / "run.cfg";
  std::ofstream(path) << "# comment\ngroup=sol\nrmax = 7\nmax_mult=3\n";
  const auto c = parse_config({"growth", "--config", path.string(), "--group", "nil"});
  EXPECT_EQ(c.group, GroupChoice::Nil);
  EXPECT_EQ(c.rmax, 7U);
  EXPECT_EQ(c.max_mult, 3U);
  std::ofstream(path) << "group=sol\nflavour=mint\n";
  EXPECT_EQ(parse_error({"growth", "--config", path.string()}), ErrorKind::UnknownKey);
}

TEST(ParseConfig, EchoIsDeterministic) {
  const auto c = parse_config({"verify", "--group", "sol", "--count", "3", "--seed", "9"});
  EXPECT_EQ(echo(c), echo(parse_config({"verify", "--seed", "9", "--count", "3", "--group", "sol"})));
  EXPECT_NE(echo(c).find("# rng=mt19937_64"), std::string::npos);
}

TEST(Dispatch, GrowthZ2) {
  const auto r = run_cli({"growth", "--group", "z2", "--rmax", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r,size\n0,1\n1,5\n2,13\n"), std::string::npos) << r.out;
}

TEST(Dispatch, GrowthWritesCsvFile) {
  const auto dir = temp_dir();
  const auto r = run_cli({"growth", "--group", "nil", "--rmax", "8", "--out", (dir / "g.csv").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "g.csv").substr(0, 22), "r,size\n0,1\n1,9\n2,47\n3,");
  EXPECT_NE(r.out.find("\"polynomial\""), std::string::npos);
}

TEST(Dispatch, VerifyNil) {
  const auto r = run_cli({"verify", "--group", "nil", "--count", "50", "--seed", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"checked\":50,\"held\":50"), std::string::npos) << r.out;
}

TEST(Dispatch, TransportSingleton) {
  const auto r = run_cli({"transport", "--group", "nil", "--domain", "singleton"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"average\": \"8/9\""), std::string::npos) << r.out;
}

TEST(Dispatch, TransportFromDomainFile) {
  const auto dir = temp_dir();
  const auto sol = TorusBundleGroup::sol();
  write_domain(random_connected(sol, default_generators(sol), 25, 2, 3), (dir / "d.txt").string());
  const auto r = run_cli({"transport", "--group", "sol", "--domain", "file:" + (dir / "d.txt").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto mismatch = run_cli({"transport", "--group", "nil", "--domain", "file:" + (dir / "d.txt").string()});
  EXPECT_EQ(mismatch.code, 2);
  EXPECT_NE(mismatch.err.find("ConfigMismatch"), std::string::npos);
}

TEST(Dispatch, ProfileAndDeterminism) {
  const std::vector<std::string> args = {"profile", "--group", "z2", "--family", "random", "--n-lo", "2",
                                         "--n-hi", "6", "--seed", "4", "--max-mult", "2"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("group,family,n,mass,gradient,radius,avg_num,avg_den,witness_len\nz2,random,2,"),
            std::string::npos);
  EXPECT_NE(a.out.find("\"exponent_claim\":\"quadratic\""), std::string::npos);
}

TEST(Dispatch, BallUsesCacheDirectory) {
  const auto dir = temp_dir();
  ::setenv("VTL_CACHE_DIR", dir.string().c_str(), 1);
  const auto first = run_cli({"ball", "--group", "nil", "--radius", "3"});
  const auto second = run_cli({"ball", "--group", "nil", "--radius", "3"});
  ::unsetenv("VTL_CACHE_DIR");
  EXPECT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("\"cache_loaded\":false"), std::string::npos);
  EXPECT_NE(second.out.find("\"cache_loaded\":true"), std::string::npos);
  EXPECT_NE(second.out.find("\"size\":159"), std::string::npos);
  const auto cache = dir / "ball-nil-r3.txt";
  ASSERT_TRUE(std::filesystem::exists(cache));
  const auto sol = run_cli({"ball", "--group", "sol", "--radius", "3", "--cache", cache.string()});
  EXPECT_EQ(sol.code, 2);
  EXPECT_NE(sol.err.find("ConfigMismatch"), std::string::npos);
}

TEST(Dispatch, ExitCodes) {
  EXPECT_EQ(run_cli({"growth", "--group", "custom", "--matrix", "2,0,0,2"}).code, 2);
  EXPECT_EQ(run_cli({"growth", "--group", "custom", "--matrix", "3,2,1,1"}).code, 2);  // no default gens
  const auto limited = run_cli({"growth", "--group", "sol", "--rmax", "6", "--cap", "100"});
  EXPECT_EQ(limited.code, 3);
  EXPECT_NE(limited.err.find("ResourceLimit"), std::string::npos);
  EXPECT_EQ(run_cli({"growth", "--group", "z2", "--out", "/nonexistent/dir/x.csv"}).code, 5);
  const auto custom = run_cli({"growth", "--group", "custom", "--matrix", "3,2,1,1", "--gens", "a,b,t", "--rmax", "3"});
  EXPECT_EQ(custom.code, 0) << custom.err;
  EXPECT_NE(custom.out.find("1,7\n"), std::string::npos);
}
