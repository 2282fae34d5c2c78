#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsbauth/ncs_sim.hpp"
#include "lsbauth_cli/commands.hpp"
#include "lsbauth_cli/config.hpp"

using namespace lsbauth;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kConfig = std::string(LSBAUTH_CONFIG_DIR) + "/hydro_turbine.cfg";

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("lsbauth_test_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("bundled config loads the hydro turbine scenario") {
  const auto c = cli::load_config(kConfig);
  const auto h = hydro_turbine_model();
  CHECK(c.sim.model.A == h.A);
  CHECK(c.sim.model.K == h.K);
  CHECK(c.sim.model.Q == h.Q);
  CHECK(c.sim.model.Sigma_w == h.Sigma_w);
  CHECK(c.sim.L == 4);
  CHECK(c.sim.r == 2);
  CHECK(c.sim.format == NumberFormat(FloatFormat{5, 10}));
  REQUIRE(c.sim.attacks.size() == 2);
  CHECK(c.sim.attacks[0].kind == AttackKind::replay);
  CHECK(c.sim.attacks[0].tau == 10);
  CHECK(c.sim.attacks[1].beta == 0.95);
  CHECK(c.sim.channel.p == 0.8);
  CHECK(c.sim.channel.start == 110);
  CHECK(c.sim.T == 150);
}

TEST_CASE("integer lists") {
  CHECK(cli::parse_int_list("0..3") == std::vector<int>{0, 1, 2, 3});
  CHECK(cli::parse_int_list("1,4,6..7") == std::vector<int>{1, 4, 6, 7});
  CHECK(cli::parse_int_list("5..4").empty());
  CHECK_THROWS(cli::parse_int_list("a"));
}

TEST_CASE("security table") {
  const auto r = run({"security", "--L", "4", "--r", "2", "--T", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "L,r,T,probability\n4,2,1,0.121094\n");
  CHECK(run({"security", "--L", "4", "--r", "1", "--T", "0"}).out == "L,r,T,probability\n4,1,0,1\n");
  CHECK(run({"security", "--L", "", "--r", "1", "--T", "1"}).code == 2);

  const auto mc = run({"security", "--L", "4", "--r", "2", "--T", "1", "--monte-carlo", "20000", "--seed", "3"});
  REQUIRE(mc.code == 0);
  std::istringstream in(mc.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "L,r,T,probability,empirical,sigma");
  double p = 0, emp = 0, sigma = 0;
  int L = 0, rr = 0, T = 0;
  REQUIRE(std::sscanf(row.c_str(), "%d,%d,%d,%lf,%lf,%lf", &L, &rr, &T, &p, &emp, &sigma) == 6);
  CHECK(std::abs(emp - p) <= 3 * sigma);
}

TEST_CASE("metrics exit codes and rows") {
  CHECK(run({"metrics", "--format", "fx:q7m8", "--L", ""}).code == 2);
  CHECK(run({"metrics", "--format", "fx:q7m8", "--L", "9"}).code == 2);
  const auto r = run({"metrics", "--format", "fl:q5m10", "--L", "0..10"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
  CHECK(r.out.find("diverged") != std::string::npos);
}

TEST_CASE("config and model errors map to exit codes") {
  const auto unknown = temp_file("unknown.cfg", "T: 10\nbogus: 1\n");
  const auto r = run({"--config", unknown.string(), "simulate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);

  const auto unstable = temp_file("unstable.cfg", "model:\n  K: [[0, 0, 0]]\n");
  CHECK(run({"--config", unstable.string(), "simulate"}).code == 3);
  CHECK(run({"--config", unstable.string(), "metrics"}).code == 3);

  const auto nested = temp_file("nested.cfg", "channel:\n  dropout_p: 0.5\n  extra: 2\n");
  CHECK(run({"--config", nested.string(), "simulate"}).code == 2);

  CHECK(run({"--config", "/nonexistent.cfg", "simulate"}).code == 2);
  CHECK(run({"simulate", "--L", "11"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("vectors are deterministic and verify") {
  const auto a = run({"vectors"});
  const auto b = run({"vectors"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\n" + std::string(40, '0').replace(0, 40, "0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b") + ", ") !=
        std::string::npos);
  const auto file = temp_file("vectors.txt", a.out);
  const auto check = run({"vectors", "--check", file.string()});
  CHECK(check.code == 0);
  CHECK(check.out.find(" vectors verify") != std::string::npos);

  std::string tampered = a.out;
  const auto pos = tampered.rfind(", ");
  tampered[pos + 2] = tampered[pos + 2] == '0' ? '1' : '0';
  const auto bad = temp_file("bad_vectors.txt", tampered);
  CHECK(run({"vectors", "--check", bad.string()}).code == 1);
}

TEST_CASE("simulate: L = 0 trace equals the baseline loop") {
  const auto cli_out = run({"--config", kConfig, "--seed", "5", "simulate", "--L", "0"});
  REQUIRE(cli_out.code == 0);
  auto c = cli::load_config(kConfig);
  c.sim.seed = 5;
  c.sim.L = 0;
  std::ostringstream os;
  write_trace_csv(os, simulate(c.sim));
  CHECK(cli_out.out == os.str());
}

TEST_CASE("simulate: flags override the config and --out writes the trace") {
  const auto path = std::filesystem::temp_directory_path() / "lsbauth_test_trace.csv";
  const auto r = run({"--config", kConfig, "--out", path.string(), "simulate", "--T", "20"});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 21);
  CHECK(r.out.find("alarms:") != std::string::npos);
}

TEST_CASE("simulate: false alarm reported iff a drop run exceeds r") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto r = run({"--seed", std::to_string(seed), "simulate", "--dropout-p", "0.8", "--r", "2",
                        "--T", "150", "--L", "4"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int run_len = 0, longest = 0, alarms = 0;
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) f.push_back(cell);
      const bool g = f[5] == "1";
      const bool dropped = f[6] == "1";
      run_len = dropped ? run_len + 1 : 0;
      longest = std::max(longest, run_len);
      alarms += g;
    }
    CAPTURE(seed);
    CHECK((alarms > 0) == (longest >= 3));
    CHECK(r.err.find("longest dropout run: " + std::to_string(longest)) != std::string::npos);
  }
}
