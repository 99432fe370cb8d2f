// Copyright 2026 The qetlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "qetlab/cli.hpp"
#include "qetlab/entanglement.hpp"
#include "qetlab/errors.hpp"
#include "qetlab/shot_sim.hpp"
#include "qetlab/sweep.hpp"

using namespace qet;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

SweepSpec small_spec(ModelKind family, std::size_t resolution = 5) {
  auto s = default_sweep_spec(family);
  s.resolution = resolution;
  return s;
}

SweepGrid synthetic(const std::vector<std::vector<double>>& rows) {
  SweepGrid g;
  for (std::size_t i = 0; i < rows.front().size(); ++i) g.x.push_back(double(i));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    g.y.push_back(double(j));
    g.values.insert(g.values.end(), rows[j].begin(), rows[j].end());
  }
  return g;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("default sweep specs per family") {
  const auto ising = default_sweep_spec(ModelKind::ising, Pauli::X);
  CHECK(ising.x_param == "h_x");
  CHECK(ising.y_param == "h_z");
  CHECK(ising.config.axis_a == Pauli::Y);
  CHECK(ising.config.axis_b == Pauli::X);
  CHECK(default_sweep_spec(ModelKind::ising, Pauli::Y).config.axis_b == Pauli::Z);
  const auto cl = default_sweep_spec(ModelKind::cluster_zz);
  CHECK(cl.x_param == "J1");
  CHECK(cl.config.axis_b == Pauli::Y);
  const auto yc = default_sweep_spec(ModelKind::y_cluster);
  CHECK(yc.x_param == "h_y");
  CHECK(yc.config.axis_b == Pauli::Z);
  CHECK_THROWS_AS(default_sweep_spec(ModelKind::jw_mapped), ContractError);
  CHECK(ising.resolution == 41);
  CHECK(ising.num_sites == 6);
}

TEST_CASE("sweep spec validation") {
  auto s = small_spec(ModelKind::cluster);
  s.x_param = "h_x";
  CHECK_THROWS_AS(validate(s), ContractError);
  s = small_spec(ModelKind::cluster);
  s.x_range = {1.0, 1.0};
  CHECK_THROWS_AS(validate(s), ContractError);
  s = small_spec(ModelKind::cluster);
  s.resolution = 1;
  CHECK_THROWS_AS(validate(s), ContractError);
  CHECK_THROWS_AS(sweep_metric_from_string("heat"), ContractError);
  CHECK(sweep_metric_from_string("qet_energy") == SweepMetric::qet_energy);
}

TEST_CASE("spec JSON round trip") {
  auto s = small_spec(ModelKind::ising);
  s.coupling_axis = Pauli::Y;
  s.fixed = {{"h_z", 0.1}};
  s.x_param = "h_x";
  s.y_param = "h_z";
  s.config = {0, 3, Pauli::Z, Pauli::X};
  const auto back = sweep_spec_from_json(nlohmann::json::parse(to_json(s).dump()));
  CHECK(to_json(back) == to_json(s));
  CHECK(back.coupling_axis == Pauli::Y);
}

TEST_CASE("sweep cells equal direct single-point computations") {
  auto s = small_spec(ModelKind::cluster_zz);
  s.x_range = {0.2, 1.0};
  s.y_range = {0.0, 0.8};
  const auto grids = run_sweep(s);
  REQUIRE(grids.size() == 2);
  CHECK(grids[0].metric == "entropy");
  CHECK(grids[1].metric == "qet_energy");
  for (std::size_t iy : {0u, 3u}) {
    for (std::size_t ix : {1u, 4u}) {
      const auto p = prepare(build_cluster(6, grids[0].x[ix], grids[0].y[iy], true, s.boundary));
      CHECK(grids[0].at(ix, iy) == doctest::Approx(half_chain_entropy(p.ground.amplitudes)).epsilon(1e-12));
      const auto r = run_qet(p.model, p.ground, s.config);
      CHECK(grids[1].at(ix, iy) == doctest::Approx(r.e_density_matrix).epsilon(1e-12));
    }
  }
  CHECK(grids[0].x.front() == 0.2);
  CHECK(grids[0].x.back() == 1.0);
  CHECK(grids[1].meta("code_version") == std::string("0.1.0"));
  CHECK(grids[1].meta("max_analytic_deviation").has_value());
  CHECK(grids[1].meta("boundary") == std::string("open"));
  CHECK(nlohmann::json::parse(*grids[1].meta("qet_config"))["axis_B"] == "Y");
  s.metric = SweepMetric::entropy;
  CHECK(run_sweep(s).size() == 1);
}

TEST_CASE("degenerate cells are flagged, not dropped") {
  auto s = small_spec(ModelKind::ising);
  s.metric = SweepMetric::entropy;
  const auto g = run_sweep(s).front();
  // h_x = h_z = 0 is the classical ferromagnet.
  CHECK(std::find(g.degenerate_cells.begin(), g.degenerate_cells.end(), std::pair<std::size_t, std::size_t>{0, 0}) !=
        g.degenerate_cells.end());
  CHECK(g.meta("degenerate_cells") != std::string("0"));
  CHECK(g.values.size() == 25);
}

TEST_CASE("sweep CSV round trip and determinism") {
  auto s = small_spec(ModelKind::y_cluster, 7);
  s.threads = 1;
  const auto serial = run_sweep(s);
  s.threads = 3;
  const auto parallel = run_sweep(s);
  for (std::size_t k = 0; k < serial.size(); ++k) {
    const auto text = to_csv(serial[k]);
    CHECK(text == to_csv(parallel[k]));
    const auto back = sweep_grid_from_csv(text);
    REQUIRE(back.x.size() == serial[k].x.size());
    REQUIRE(back.y.size() == serial[k].y.size());
    for (std::size_t i = 0; i < back.x.size(); ++i) CHECK(back.x[i] == doctest::Approx(serial[k].x[i]));
    for (std::size_t i = 0; i < back.y.size(); ++i) CHECK(back.y[i] == doctest::Approx(serial[k].y[i]));
    CHECK(back.metadata == serial[k].metadata);
    CHECK(back.metric == serial[k].metric);
    for (std::size_t i = 0; i < back.values.size(); ++i) {
      CHECK(back.values[i] == doctest::Approx(serial[k].values[i]).epsilon(1e-11));
    }
    CHECK(to_csv(back) == text);
  }
  CHECK_THROWS_AS(sweep_grid_from_csv("# metric=entropy\nx,z,value\n"), ContractError);
  CHECK_THROWS_AS(sweep_grid_from_csv("x,y,value\n0,0,1\n1,0\n"), ContractError);
}

TEST_CASE("invalid protocol sites are rejected before any cell runs") {
  auto s = small_spec(ModelKind::cluster);
  s.num_sites = 4;  // Bob's default site is then outside the chain.
  CHECK_THROWS_AS(validate(s), ContractError);
  s.metric = SweepMetric::entropy;  // entropy alone does not need the protocol sites
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("failing cells report their coordinates") {
  auto s = small_spec(ModelKind::ising, 2);
  s.metric = SweepMetric::entropy;
  s.y_range = {0.0, INFINITY};
  CHECK_THROWS_AS(validate(s), ContractError);
  // Six diagonal field terms of this size overflow to infinity only in the h_z row.
  s.y_range = {0.0, 1.7e308};
  try {
    run_sweep(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("sweep cell (0, 1)") != std::string::npos);
  }
}

TEST_CASE("ridge comparison on synthetic grids") {
  const auto a = synthetic({{0, 1, 3, 2, 0}, {5, 1, 0, 0, 0}, {1, 1, 1, 1, 1}, {0, 0, 0, 1, 4}});
  const auto b = synthetic({{0, 0, 0, -9, 0}, {-1, -7, 0, 0, 0}, {0, 2, 0, 0, 0}, {0, 0, 0, 0, 0}});
  const auto r = ridge_compare(a, b);
  REQUIRE(r.distances.size() == 4);
  CHECK(r.distances[0] == std::optional<std::size_t>(1));
  CHECK(r.distances[1] == std::optional<std::size_t>(1));
  CHECK_FALSE(r.distances[2].has_value());
  CHECK_FALSE(r.distances[3].has_value());
  CHECK(r.skipped == 2);
  CHECK(r.median == 1.0);
  CHECK(r.max == 1);
  CHECK(ridge_compare(a, b, 1, 2).distances.size() == 1);
  CHECK(row_argmax(b, 0, true) == 3);
  CHECK(row_argmax(b, 0, false) == 0);
  CHECK_THROWS_AS(ridge_compare(a, synthetic({{1, 2}})), ContractError);
}

TEST_CASE("ridge comparison negative controls") {
  std::vector<std::vector<double>> peak(9, std::vector<double>(9, 0.0)), anti = peak;
  for (std::size_t r = 0; r < 9; ++r) {
    peak[r][r] = 1.0;
    anti[r][8 - r] = -1.0;
  }
  const auto same = ridge_compare(synthetic(peak), synthetic(peak));
  CHECK(same.median == 0.0);
  CHECK(same.max == 0);
  const auto opposed = ridge_compare(synthetic(peak), synthetic(anti));
  CHECK(opposed.skipped == 0);
  CHECK(opposed.median == 4.0);
  CHECK(opposed.max == 8);
}

TEST_CASE("command line: help, usage and contract errors") {
  auto help = run_cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("sweep") != std::string::npos);
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"qet", "--N", "six"}).code == kExitUsage);
  CHECK(run_cli({"qet", "--bogus"}).code == kExitUsage);
  CHECK(run_cli({"qet", "--model", "nonsense"}).code == kExitUsage);
  const auto small = run_cli({"qet", "--model", "cluster", "--N", "2"});
  CHECK(small.code == kExitContract);
  CHECK(small.err.find("at least 3") != std::string::npos);
  CHECK(run_cli({"qet", "--nA", "4", "--nB", "4"}).code == kExitContract);
  CHECK(run_cli({"ground", "--model", "kitaev", "--boundary", "periodic"}).code == kExitContract);
}

TEST_CASE("command line: single-point subcommands") {
  const auto q = run_cli({"qet", "--model", "cluster_zz", "--N", "6", "--J1", "1.0"});
  REQUIRE(q.code == 0);
  const auto p = prepare(build_cluster(6, 1.0, 0.0, true));
  const auto r = run_qet(p.model, p.ground, {});
  CHECK(q.out.find(qet_csv_header() + "\n" + to_csv_row(r)) != std::string::npos);

  const auto g = run_cli({"ground", "--model", "ising", "--N", "5", "--hx", "0.3", "--hz", "1.1"});
  REQUIRE(g.code == 0);
  const auto j = nlohmann::json::parse(g.out);
  CHECK(j["model"]["epsilon"].size() == 5);
  CHECK(j["E0"].get<double>() == doctest::Approx(ground_state(build_ising(5, 0.3, 1.1, Pauli::X)).energy));

  const auto e = run_cli({"entropy", "--model", "y_cluster", "--N", "6", "--hy", "0.2", "--Jy", "0.1", "--base2"});
  REQUIRE(e.code == 0);
  const auto gs = ground_state(build_y_cluster(6, 0.2, 0.1));
  CHECK(std::stod(e.out) == doctest::Approx(half_chain_entropy(gs.amplitudes, LogBase::two)).epsilon(1e-10));

  const auto c = run_cli({"check", "--model", "ssh", "--size", "3", "--lambda", "0.3", "--nA", "0", "--nB", "3"});
  CHECK(c.code == 0);
  CHECK(c.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("command line: model files and ground-state dumps") {
  const auto dir = std::filesystem::temp_directory_path() / "qetlab_cli_test";
  std::filesystem::create_directories(dir);
  const auto model_path = (dir / "model.json").string();
  {
    std::ofstream os(model_path);
    os << to_json(build_cluster(6, 0.4, 0.0, true)).dump();
  }
  const auto from_file = run_cli({"qet", "--model-file", model_path});
  const auto from_flags = run_cli({"qet", "--model", "cluster_zz", "--J1", "0.4"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == from_flags.out);
  const auto dump = (dir / "gs.bin").string();
  CHECK(run_cli({"ground", "--model", "cluster", "--J1", "0.5", "--dump", dump}).code == 0);
  CHECK(read_ground_state(dump).size() == 64);
  CHECK(run_cli({"qet", "--model-file", (dir / "missing.json").string()}).code == kExitContract);
  std::filesystem::remove_all(dir);
}

TEST_CASE("command line: sweeps write one deterministic CSV per metric") {
  const auto dir = std::filesystem::temp_directory_path() / "qetlab_sweep_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> base{"sweep", "--model", "ising", "--axis", "Y", "--resolution", "6"};
  auto serial = base, parallel = base;
  serial.insert(serial.end(), {"--threads", "1", "--output", (dir / "a").string()});
  parallel.insert(parallel.end(), {"--threads", "4", "--output", (dir / "b").string()});
  REQUIRE(run_cli(serial).code == 0);
  REQUIRE(run_cli(parallel).code == 0);
  for (const char* m : {"entropy", "qet_energy"}) {
    const auto a = slurp(dir / (std::string("a_") + m + ".csv"));
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / (std::string("b_") + m + ".csv")));
    const auto g = sweep_grid_from_csv(a);
    CHECK(g.x.size() == 6);
    CHECK(nlohmann::json::parse(*g.meta("model"))["coupling_axis"] == "Y");
  }
  const auto cfg = (dir / "spec.json").string();
  {
    auto s = small_spec(ModelKind::cluster, 4);
    s.metric = SweepMetric::entropy;
    std::ofstream os(cfg);
    os << to_json(s).dump();
  }
  const auto from_cfg = run_cli({"sweep", "--config", cfg});
  REQUIRE(from_cfg.code == 0);
  CHECK(from_cfg.out.find("# metric=entropy") == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("command line: table reproduction is byte-identical per seed") {
  const auto a = run_cli({"table1", "--shots", "30000", "--seed", "9", "--threads", "1"});
  const auto b = run_cli({"table1", "--shots", "30000", "--seed", "9", "--threads", "2"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto l = run_cli({"table1", "--shots", "30000", "--seed", "9", "--long"});
  CHECK(l.out.rfind(shot_csv_header(), 0) == 0);
  CHECK(std::count(l.out.begin(), l.out.end(), '\n') == 1 + 5 * 6);
}

TEST_CASE("installed executable reports exit codes") {
  const std::string exe = QETLAB_CLI_PATH;
  const int ok = std::system((exe + " --help > /dev/null").c_str());
  CHECK(WEXITSTATUS(ok) == 0);
  const int usage = std::system((exe + " qet --N > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(usage) == 2);
  const int contract = std::system((exe + " qet --nA 9 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(contract) == 1);
}
