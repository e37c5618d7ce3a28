// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netclust/cli.hpp"
#include "netclust/io.hpp"

using namespace netclust;

namespace {

const std::string kTestDir = NETCLUST_TEST_DIR;
const std::string kNetwork = kTestDir + "/fixtures/path3_network.json";
const std::string kAep = kTestDir + "/fixtures/path3_aep.json";
const std::string kNonAep = kTestDir + "/fixtures/path3_nonaep.json";
const std::string kQuotient = kTestDir + "/fixtures/quotient_star.json";

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult result;
  result.code = run_cli(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string golden(const std::string& name) {
  return io::read_file(kTestDir + "/golden/" + name);
}

}  // namespace

TEST_CASE("check-aep exit codes") {
  CHECK(run({"check-aep", kNetwork, kAep}).code == 0);
  CHECK(run({"check-aep", kNetwork, kNonAep}).code == 1);
  const CliResult missing = run({"check-aep", kNetwork, "/nonexistent.json"});
  CHECK(missing.code == 2);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"check-aep"}).code == 2);  // missing arguments
}

TEST_CASE("check-aep witness payload") {
  const CliResult r = run({"check-aep", kNetwork, kAep});
  const auto j = io::Json::parse(r.out);
  CHECK(j["aep"] == true);
  CHECK(j["definition"]["verdict"] == true);
  CHECK(j["subspace"]["verdict"] == true);
  CHECK(j["subspace"]["subspace_residual"].get<double>() <= 1e-9);
}

TEST_CASE("reduce writes the golden quotient") {
  const std::string out = temp_path("netclust_reduce_out.json");
  const std::string map = temp_path("netclust_reduce_map.json");
  CHECK(run({"reduce", kNetwork, kAep, "--out", out, "--map", map}).code == 0);
  CHECK(io::read_file(out) == golden("path3_reduced.json"));
  CHECK(io::read_file(map) == golden("path3_reduced_map.json"));

  // Byte-identical on a second run.
  CHECK(run({"reduce", kNetwork, kAep, "--out", out, "--map", map}).code == 0);
  CHECK(io::read_file(out) == golden("path3_reduced.json"));

  CHECK(run({"reduce", kNetwork, "/nonexistent.json", "--out", out}).code == 2);
}

TEST_CASE("enumerate matches the golden listing and is stable") {
  const CliResult first = run({"enumerate", kNetwork});
  CHECK(first.code == 0);
  CHECK(first.out == golden("path3_enumerate.json"));
  const CliResult second = run({"enumerate", kNetwork});
  CHECK(second.out == first.out);

  // Vertex-count cap.
  const CliResult capped = run({"enumerate", kNetwork, "--max-n", "2"});
  CHECK(capped.code == 2);
  CHECK(capped.err.find("cap") != std::string::npos);
}

TEST_CASE("h2 matches the golden report and is stable with oracles") {
  const CliResult closed = run({"h2", kNetwork, kAep});
  CHECK(closed.code == 0);
  CHECK(closed.out == golden("path3_h2.json"));

  const CliResult once = run({"h2", kNetwork, kAep, "--oracle"});
  const CliResult twice = run({"h2", kNetwork, kAep, "--oracle"});
  CHECK(once.code == 0);
  CHECK(once.out == twice.out);

  const CliResult bare = run({"h2", kNetwork});
  const auto j = io::Json::parse(bare.out);
  CHECK(j.contains("h2_full_closed"));
  CHECK_FALSE(j.contains("h2_reduced_closed"));
}

TEST_CASE("h2 reports errors for disconnected dampers") {
  const std::string path = temp_path("netclust_disconnected.json");
  io::write_file(path, R"({"vertices":[{"id":1,"mass":1.0},{"id":2,"mass":1.0}],
    "edges":[],"inputs":[1]})");
  const CliResult r = run({"h2", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("connected") != std::string::npos);
}

TEST_CASE("simulate writes trajectories and the comparison") {
  const std::string csv = temp_path("netclust_traj.csv");
  const CliResult r = run({"simulate", kNetwork, kAep, "--input", "impulse:1",
                           "--t-end", "20", "--dt", "0.001", "--out-csv", csv});
  CHECK(r.code == 0);
  const auto j = io::Json::parse(r.out);
  CHECK(std::abs(j["compare"]["l2_error_sq"].get<double>() - 0.25) < 1e-2);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,state_1,state_2,state_3,y_1,y_2,energy");

  // Zero input from rest: outputs identically zero.
  const std::string csv0 = temp_path("netclust_rest.csv");
  const CliResult rest = run({"simulate", kNetwork, "--input", "zero", "--t-end", "1",
                              "--dt", "0.01", "--out-csv", csv0});
  CHECK(rest.code == 0);
  std::ifstream in0(csv0);
  std::string line;
  std::getline(in0, line);
  while (std::getline(in0, line)) {
    CHECK(line.substr(line.find(',') + 1) == "0,0,0,0,0,0");
  }
}

TEST_CASE("second-order commands") {
  const std::string msd = kTestDir + "/fixtures/msd_pair.json";
  const std::string onecell = kTestDir + "/fixtures/pair_onecell.json";

  const CliResult r = run({"h2", msd, onecell, "--order", "2", "--oracle"});
  CHECK(r.code == 0);
  const auto j = io::Json::parse(r.out);
  CHECK(j["xi_formula"].get<double>() == doctest::Approx(0.25));
  CHECK(j["joint_aep"]["joint"] == true);
  CHECK(std::abs(j["xi_oracle"].get<double>() - 0.25) <= 1e-6);

  // Second-order reports need a partition.
  CHECK(run({"h2", msd, "--order", "2"}).code == 2);

  const std::string csv = temp_path("netclust_msd.csv");
  const CliResult sim = run({"simulate", msd, onecell, "--order", "2", "--input",
                             "impulse:1", "--t-end", "10", "--dt", "0.001",
                             "--out-csv", csv});
  CHECK(sim.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,state_1,state_2,state_3,y_1,energy");
}

TEST_CASE("synth produces a verifiable AEP instance") {
  const std::string net = temp_path("netclust_synth_net.json");
  const std::string part = temp_path("netclust_synth_part.json");
  CHECK(run({"synth", kQuotient, "--out-network", net, "--out-partition", part}).code == 0);
  CHECK(run({"check-aep", net, part}).code == 0);
}

TEST_CASE("network files round-trip") {
  const std::string text = io::read_file(kNetwork);
  const NetworkGraph g = io::parse_network_string(text);
  const std::string again = io::dump(io::network_to_json(g));
  CHECK(again == text);
  const NetworkGraph g2 = io::parse_network_string(again);
  CHECK(g2.n == g.n);
  CHECK((g2.masses - g.masses).norm() == 0.0);
  CHECK(g2.edges.size() == g.edges.size());
}

TEST_CASE("malformed files are rejected with diagnostics") {
  const std::string bad = temp_path("netclust_bad.json");
  io::write_file(bad, "{not json");
  CHECK(run({"h2", bad}).code == 2);

  io::write_file(bad, R"({"vertices":[{"id":1,"mass":-1.0}],"edges":[],"inputs":[]})");
  CHECK(run({"h2", bad}).code == 2);

  io::write_file(bad, R"({"vertices":[{"id":1,"mass":1.0},{"id":3,"mass":1.0}],
    "edges":[],"inputs":[]})");
  const CliResult gap = run({"h2", bad});
  CHECK(gap.code == 2);  // ids must be contiguous 1..n
}

TEST_CASE("NETCLUST_TOL loosens the verdict") {
  ::setenv("NETCLUST_TOL", "10.0", 1);
  CHECK(run({"check-aep", kNetwork, kNonAep}).code == 0);
  ::unsetenv("NETCLUST_TOL");
  CHECK(run({"check-aep", kNetwork, kNonAep}).code == 1);
  ::setenv("NETCLUST_TOL", "not-a-number", 1);
  CHECK(run({"check-aep", kNetwork, kNonAep}).code == 2);
  ::unsetenv("NETCLUST_TOL");
}
