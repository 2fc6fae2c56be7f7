#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "dtdd/csv.hpp"
#include "dtdd/harness.hpp"
#include "helpers.hpp"

using namespace dtdd;
using dtdd::testing::pair_topology;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(bool(f));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("dtdd_tests_" + leaf);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

FullConfig tiny_config() {
  FullConfig cfg;
  cfg.sim.n_pairs = 1;
  cfg.sim.n_slots = 2;
  cfg.sim.seed = 7;
  cfg.exp.repetitions = 2;
  cfg.exp.power_dbm_grid = {0.0, 10.0};
  cfg.exp.dim_m_grid = {500.0, 1000.0};
  cfg.exp.schemes = {"bs1"};
  cfg.exp.mu1_points = 3;
  cfg.exp.complexity_nodes = {4};
  cfg.exp.complexity_slots = 2;
  return cfg;
}

}  // namespace

TEST_CASE("scheme names round-trip and unknown names are rejected") {
  for (Scheme s : {Scheme::ProposedFd, Scheme::ProposedHd, Scheme::ProposedMixed, Scheme::Bs1,
                   Scheme::Bs3}) {
    CHECK(scheme_from_name(scheme_name(s)) == s);
  }
  CHECK_THROWS_AS((void)scheme_from_name("bs2"), ConfigError);
  CHECK_THROWS_AS((void)scheme_from_name(""), ConfigError);
}

TEST_CASE("schemes stamp their duplex capability onto the topology") {
  const Topology base = pair_topology(3);
  for (Scheme s : {Scheme::ProposedFd, Scheme::Bs3}) {
    const Topology t = apply_scheme_duplex(base, s);
    for (int k = 0; k < 6; ++k) CHECK_FALSE(t.is_hd(k));
  }
  for (Scheme s : {Scheme::ProposedHd, Scheme::Bs1}) {
    const Topology t = apply_scheme_duplex(base, s);
    for (int k = 0; k < 6; ++k) CHECK(t.is_hd(k));
  }
  const Topology mixed = apply_scheme_duplex(base, Scheme::ProposedMixed);
  // Pairs alternate: pair 0 full-duplex, pair 1 half-duplex, pair 2 full-duplex.
  CHECK_FALSE(mixed.is_hd(0));
  CHECK_FALSE(mixed.is_hd(1));
  CHECK(mixed.is_hd(2));
  CHECK(mixed.is_hd(3));
  CHECK_FALSE(mixed.is_hd(4));
  CHECK_FALSE(mixed.is_hd(5));
}

TEST_CASE("scheme topologies share the drop and differ only in duplex flags") {
  SimConfig sim;
  sim.n_pairs = 3;
  sim.seed = 21;
  const Topology fd = scheme_topology(sim, Scheme::ProposedFd, 4);
  const Topology hd = scheme_topology(sim, Scheme::Bs1, 4);
  REQUIRE(fd.node_count() == 6);
  REQUIRE(hd.node_count() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(fd.nodes()[static_cast<std::size_t>(k)].x_m == hd.nodes()[static_cast<std::size_t>(k)].x_m);
    CHECK(fd.nodes()[static_cast<std::size_t>(k)].y_m == hd.nodes()[static_cast<std::size_t>(k)].y_m);
    CHECK_FALSE(fd.is_hd(k));
    CHECK(hd.is_hd(k));
  }
  // Different repetition, different drop.
  const Topology other = scheme_topology(sim, Scheme::ProposedFd, 5);
  CHECK(other.nodes()[0].x_m != fd.nodes()[0].x_m);
  // Same inputs, identical drop.
  CHECK(scheme_topology(sim, Scheme::ProposedFd, 4).to_json() == fd.to_json());
}

TEST_CASE("config parsing is strict at every nesting level") {
  CHECK_THROWS_AS((void)FullConfig::from_json({{"bogus_key", 1}}), ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"solver", {{"bogus", 1}}}}), ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"experiment", {{"bogus", 1}}}}), ConfigError);
  CHECK_THROWS_AS(
      (void)FullConfig::from_json({{"experiment", {{"fairness", {{"bogus", 1}}}}}}),
      ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"experiment", {{"weights", "wrong"}}}}),
                  ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"experiment", {{"mu1_points", 1}}}}), ConfigError);
  CHECK_THROWS_AS(
      (void)FullConfig::from_json({{"experiment", {{"complexity_nodes", {3}}}}}), ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"experiment", {{"oracle_n_pairs", 7}}}}),
                  ConfigError);
  CHECK_THROWS_AS((void)FullConfig::from_json({{"experiment", {{"schemes", {"bs2"}}}}}),
                  ConfigError);
}

TEST_CASE("full config survives a json round trip") {
  FullConfig cfg = tiny_config();
  cfg.sim.tx_power_dbm = 12.5;
  cfg.solver.restarts = 5;
  cfg.exp.weights = WeightRule::Uniform;
  cfg.exp.fairness.demand_fraction = 0.75;
  const FullConfig back = FullConfig::from_json(cfg.to_json());
  CHECK(back.sim.tx_power_dbm == 12.5);
  CHECK(back.sim.n_pairs == 1);
  CHECK(back.sim.seed == 7);
  CHECK(back.solver.restarts == 5);
  CHECK(back.exp.repetitions == 2);
  CHECK(back.exp.weights == WeightRule::Uniform);
  CHECK(back.exp.schemes == std::vector<std::string>{"bs1"});
  CHECK(back.exp.fairness.demand_fraction == 0.75);
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("power sweep produces one aggregated cell per grid point and scheme") {
  FullConfig cfg = tiny_config();
  cfg.exp.schemes = {"bs1", "bs3"};
  const auto cells = run_power_sweep(cfg, ExecMode::Serial);
  REQUIRE(cells.size() == 4u);  // 2 powers x 2 schemes, no si crossing requested

  // Grid-major ordering, scheme order as listed.
  CHECK(cells[0].x_value == 0.0);
  CHECK(cells[0].scheme == Scheme::Bs1);
  CHECK(cells[1].x_value == 0.0);
  CHECK(cells[1].scheme == Scheme::Bs3);
  CHECK(cells[2].x_value == 10.0);
  CHECK(cells[3].x_value == 10.0);

  for (const CellResult& c : cells) {
    CHECK(c.n_ok == 2);
    REQUIRE(c.rep_sum_rate.size() == 2u);
    CHECK(c.rep_error[0].empty());
    CHECK(c.rep_error[1].empty());
    CHECK(c.mean_sum_rate == (c.rep_sum_rate[0] + c.rep_sum_rate[1]) / 2.0);
    CHECK(c.stderr_mean >= 0.0);
    CHECK(c.si_db == cfg.sim.si_suppression_db);
  }
}

TEST_CASE("self-interference grid multiplies full-duplex cells only") {
  FullConfig cfg = tiny_config();
  cfg.exp.schemes = {"proposed_fd", "bs1"};
  cfg.exp.si_db = {80.0, 110.0};
  cfg.exp.power_dbm_grid = {5.0};
  cfg.sim.n_slots = 1;
  const auto cells = run_power_sweep(cfg, ExecMode::Serial);
  REQUIRE(cells.size() == 3u);  // proposed_fd at 80 and 110 dB, bs1 once
  CHECK(cells[0].scheme == Scheme::ProposedFd);
  CHECK(cells[0].si_db == 80.0);
  CHECK(cells[1].scheme == Scheme::ProposedFd);
  CHECK(cells[1].si_db == 110.0);
  CHECK(cells[2].scheme == Scheme::Bs1);
  CHECK(cells[2].si_db == cfg.sim.si_suppression_db);
}

TEST_CASE("sweeps are identical across execution modes and reruns") {
  FullConfig cfg = tiny_config();
  cfg.exp.schemes = {"proposed_fd", "bs1"};
  const auto a = run_power_sweep(cfg, ExecMode::Serial);
  const auto b = run_power_sweep(cfg, ExecMode::OpenMp);
  const auto c = run_power_sweep(cfg, ExecMode::Serial);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mean_sum_rate == b[i].mean_sum_rate);
    CHECK(a[i].stderr_mean == b[i].stderr_mean);
    CHECK(a[i].rep_sum_rate == b[i].rep_sum_rate);
    CHECK(a[i].mean_sum_rate == c[i].mean_sum_rate);
    CHECK(a[i].rep_sum_rate == c[i].rep_sum_rate);
  }
}

TEST_CASE("dimension sweep varies the deployment area") {
  FullConfig cfg = tiny_config();
  // With one pair the rates depend only on the intra-pair distance, which is drawn
  // independently of the area; a second pair brings area-scaled cross distances in.
  cfg.sim.n_pairs = 2;
  const auto cells = run_dim_sweep(cfg, ExecMode::Serial);
  REQUIRE(cells.size() == 2u);  // 2 areas x 1 scheme
  CHECK(cells[0].x_value == 500.0);
  CHECK(cells[1].x_value == 1000.0);
  CHECK(cells[0].mean_sum_rate != cells[1].mean_sum_rate);
}

TEST_CASE("rate region grid spans both priority extremes") {
  FullConfig cfg = tiny_config();
  cfg.sim.n_slots = 4;
  const auto cells = run_rate_region(cfg, ExecMode::Serial);
  REQUIRE(cells.size() == 3u);  // 3 grid points x 1 scheme
  CHECK(cells[0].mu1 == 0.0);
  CHECK(cells[1].mu1 == 0.5);
  CHECK(cells[2].mu1 == 1.0);
  for (const RegionCell& c : cells) {
    CHECK(c.scheme == Scheme::Bs1);
    CHECK(c.n_ok == 2);
    CHECK(c.rate_group1 > 0.0);
    CHECK(c.rate_group2 > 0.0);
  }
  // The fixed alternating schedule ignores the priority weights entirely, so the
  // group rates must not move across the grid.
  CHECK(cells[0].rate_group1 == cells[2].rate_group1);
  CHECK(cells[0].rate_group2 == cells[2].rate_group2);
}

TEST_CASE("complexity harness reports both methods for every network size") {
  FullConfig cfg = tiny_config();
  cfg.exp.complexity_nodes = {4, 6};
  const auto rows = run_complexity(cfg, ExecMode::Serial);
  REQUIRE(rows.size() == 4u);
  CHECK(rows[0].n_nodes == 4);
  CHECK(rows[0].method == "optimize_slot");
  CHECK(rows[1].n_nodes == 4);
  CHECK(rows[1].method == "brute_force");
  CHECK(rows[2].n_nodes == 6);
  CHECK(rows[3].n_nodes == 6);
  for (const ComplexityRow& r : rows) {
    CHECK(r.mean_time_us > 0.0);
    CHECK(r.n_samples >= 1);
  }
}

TEST_CASE("single run uses the configured slot count and weight rule") {
  FullConfig cfg = tiny_config();
  cfg.sim.n_slots = 4;
  const SingleRunOutcome run = run_single(cfg, Scheme::Bs1, ExecMode::Serial);
  CHECK(run.scheme == Scheme::Bs1);
  REQUIRE(run.slots.size() == 4u);
  CHECK(run.mu.values() == WeightVector::inverse_index(2).values());
  for (const SlotOutcome& o : run.slots) {
    CHECK(o.record.per_node_rate.size() == 2u);
  }
}

TEST_CASE("csv writer emits rfc4180 bytes with minimal quoting") {
  CsvWriter csv({"name", "note"});
  csv.add_row({"plain", "a,b"});
  csv.add_row({"quote\"y", "line\nbreak"});
  CHECK(csv.to_string() ==
        "name,note\r\n"
        "plain,\"a,b\"\r\n"
        "\"quote\"\"y\",\"line\nbreak\"\r\n");
}

TEST_CASE("csv numeric formatting is stable and compact") {
  CHECK(CsvWriter::num(0.0) == "0");
  CHECK(CsvWriter::num(2.5) == "2.5");
  CHECK(CsvWriter::num(0.1) == "0.1");
  CHECK(CsvWriter::num(1e30) == "1e+30");
  CHECK(CsvWriter::num(-42) == "-42");
  CHECK(CsvWriter::num(123456789012LL) == "123456789012");
  CHECK(CsvWriter::num(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("command line rejects missing or malformed invocations") {
  CHECK(cli_main({}) == 1);
  CHECK(cli_main({"definitely-not-a-subcommand"}) == 1);
  CHECK(cli_main({"sweep-power", "--config", "/nonexistent/nope.json", "--quiet"}) == 1);
  CHECK(cli_main({"sweep-power", "--scheme", "bs2", "--quiet"}) == 1);
}

TEST_CASE("command line sweep writes the full output set deterministically") {
  const fs::path dir = fresh_dir("cli_sweep");
  const fs::path cfg_path = dir / "config.json";
  {
    nlohmann::json j;
    j["n_pairs"] = 1;
    j["n_slots"] = 2;
    j["seed"] = 7;
    j["experiment"] = {{"repetitions", 2},
                       {"power_dbm_grid", {0.0, 10.0}},
                       {"schemes", {"bs1", "proposed_fd"}}};
    std::ofstream f(cfg_path, std::ios::binary);
    f << j.dump(2) << "\n";
  }

  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";
  CHECK(cli_main({"sweep-power", "--config", cfg_path.string(), "--out", out_a.string(),
                  "--quiet"}) == 0);
  CHECK(cli_main({"sweep-power", "--config", cfg_path.string(), "--out", out_b.string(),
                  "--quiet", "--serial"}) == 0);

  for (const char* name : {"sweep_power.csv", "sweep_power_raw.csv", "manifest.json"}) {
    CHECK(fs::exists(out_a / name));
    CHECK(fs::exists(out_b / name));
  }
  // Threaded and serial invocations must produce identical result bytes.
  CHECK(read_bytes(out_a / "sweep_power.csv") == read_bytes(out_b / "sweep_power.csv"));
  CHECK(read_bytes(out_a / "sweep_power_raw.csv") == read_bytes(out_b / "sweep_power_raw.csv"));

  const std::string csv = read_bytes(out_a / "sweep_power.csv");
  CHECK(csv.rfind("x_value,scheme,si_db,mean_sum_rate,stderr,n_reps\r\n", 0) == 0);

  const nlohmann::json manifest = nlohmann::json::parse(read_bytes(out_a / "manifest.json"));
  CHECK(manifest.at("version").get<std::string>() == std::string(kVersion));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 7u);
  CHECK(manifest.at("config").at("n_pairs").get<int>() == 1);
  CHECK(manifest.at("command").get<std::string>().find("sweep-power") != std::string::npos);
}

TEST_CASE("command line seed override lands in the manifest") {
  const fs::path dir = fresh_dir("cli_seed");
  const fs::path out = dir / "out";
  CHECK(cli_main({"simulate", "--seed", "99", "--scheme", "bs1", "--out", out.string(),
                  "--quiet"}) == 0);
  CHECK(fs::exists(out / "rates_bs1.csv"));
  CHECK(fs::exists(out / "topology_bs1.json"));
  const nlohmann::json manifest = nlohmann::json::parse(read_bytes(out / "manifest.json"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 99u);
}
