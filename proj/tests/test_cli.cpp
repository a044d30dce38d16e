#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "pwvem/config.hpp"

using namespace pwvem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

// Run the binary inside `dir`, capturing both streams.
Run run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" PWVEM_CLI "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(dir / "stdout.txt"), slurp(dir / "stderr.txt")};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pwvem_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kFastPatch = "--experiment patch --mesh structured:2 --p 5 --k 4";

}  // namespace

TEST_CASE("int lists") {
  // ranges step over odd p
  CHECK(parse_int_list("3..7") == std::vector<int>{3, 5, 7});
  CHECK(parse_int_list("5,9,13") == std::vector<int>{5, 9, 13});
  CHECK(parse_int_list("3..5,9") == std::vector<int>{3, 5, 9});
  CHECK_THROWS_AS(parse_int_list("7..3"), UsageError);
  CHECK_THROWS_AS(parse_int_list("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_int_list("x"), UsageError);
  CHECK(parse_real_list("1,3/2,2/3")[1] == 1.5);
}

TEST_CASE("config parsing and resolution") {
  std::istringstream in("# comment\nk = 20\n\nexperiment = patch  # trailing\nmesh = structured:2\n");
  const auto kv = parse_key_values(in);
  REQUIRE(kv.size() == 3);
  CHECK(kv[0].first == "k");
  CHECK(kv[0].second == "20");

  ExperimentConfig c;
  pwvem::apply(c, kv);
  pwvem::apply(c, KeyValues{{"k", "40"}});
  c = resolve(c);
  CHECK(*c.k == 40);
  CHECK(c.experiment == ExperimentKind::Patch);
  CHECK_FALSE(c.p_list.empty());
  CHECK_FALSE(c.variants.empty());

  // echo round-trips
  std::stringstream echo;
  write_config(echo, c);
  ExperimentConfig back;
  pwvem::apply(back, parse_key_values(echo));
  back = resolve(back);
  CHECK(*back.k == 40);
  CHECK(back.p_list == c.p_list);
  CHECK(back.mesh == c.mesh);

  ExperimentConfig bad;
  const KeyValues unknown = {{"wavenumber", "3"}};
  CHECK_THROWS_AS(pwvem::apply(bad, unknown), UsageError);
  bad.p_list = {4};
  bad.k = 20;
  try {
    (void)resolve(bad);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("p = 2m+1") != std::string::npos);
  }
  ExperimentConfig pol;
  pwvem::apply(pol, KeyValues{{"experiment", "pollution"}, {"k", "20"}});
  CHECK_THROWS_AS((void)resolve(pol), UsageError);

  std::istringstream broken("k 20\n");
  CHECK_THROWS(parse_key_values(broken));
}

TEST_CASE("even p is a usage error") {
  const auto dir = scratch("even");
  const auto r = run_cli(dir, "--experiment patch --mesh structured:2 --k 4 --p 4");
  CHECK(r.code == 2);
  CHECK(r.err.find("p = 2m+1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("unknown key in a config file") {
  const auto dir = scratch("unknown");
  std::ofstream(dir / "run.cfg") << "experiment = patch\nfrequency = 3\n";
  const auto r = run_cli(dir, "--config run.cfg");
  CHECK(r.code == 2);
  CHECK(r.err.find("frequency") != std::string::npos);
}

TEST_CASE("flags override the file and ./out is the default") {
  const auto dir = scratch("override");
  std::ofstream(dir / "run.cfg") << "experiment = patch\nk = 20\nmesh = structured:2\np = 5\n";
  const auto r = run_cli(dir, "--config run.cfg --k 4");
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(dir / "out" / "config.txt"));
  const auto cfg = slurp(dir / "out" / "config.txt");
  CHECK(cfg.rfind("# resolved configuration", 0) == 0);
  CHECK(cfg.find("k = 4\n") != std::string::npos);
  CHECK(cfg.find("k = 20") == std::string::npos);
  CHECK(fs::exists(dir / "out" / "patch.csv"));
  CHECK(r.out.find("PASS patch:pw1") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("reruns give identical csv") {
  const auto dir = scratch("rerun");
  REQUIRE(run_cli(dir, kFastPatch + " --out a").code == 0);
  REQUIRE(run_cli(dir, kFastPatch + " --out b").code == 0);
  const auto a = slurp(dir / "a" / "patch.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(dir / "b" / "patch.csv"));
}

TEST_CASE("runtime failures exit with 1") {
  const auto dir = scratch("broken");
  const auto r = run_cli(dir, "--experiment patch --k 4 --p 5 --mesh file:" PWVEM_TEST_DATA "/clockwise.mesh");
  CHECK(r.code == 1);
  CHECK(r.err.find("line 6") != std::string::npos);
  // a mesh file that does not exist is caught while resolving
  CHECK(run_cli(dir, "--experiment patch --k 4 --p 5 --mesh file:nowhere.mesh").code == 2);
}
