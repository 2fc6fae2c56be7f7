#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "dtdd/oracle.hpp"
#include "helpers.hpp"

using namespace dtdd;
using dtdd::testing::manual_channel;
using dtdd::testing::pair_topology;
using dtdd::testing::random_instance;

TEST_CASE("exhaustive search solves the hand-checkable half-duplex instance") {
  // Two half-duplex pairs, unit desired gains, symmetric 0.5 cross gains, unit
  // power. Only the receivers of nodes 0 and 2 carry weight, so the optimum
  // transmits 0 and 2 simultaneously: each served receiver gets
  // log2(1 + 1/(1+0.5)) and the weighted sum is log2(5/3).
  const Topology topo = pair_topology(2, Duplex::HalfDuplex);
  SquareMatrix g(4);
  g.at(0, 1) = 1.0;
  g.at(1, 0) = 1.0;
  g.at(2, 3) = 1.0;
  g.at(3, 2) = 1.0;
  for (int j : {0, 1}) {
    for (int k : {2, 3}) {
      g.at(j, k) = 0.5;
      g.at(k, j) = 0.5;
    }
  }
  const ChannelRealization chan = manual_channel(topo, g);
  const WeightVector mu(std::vector<double>{0.0, 0.5, 0.0, 0.5});

  const OracleResult res = brute_force_slot(chan, topo, 1.0, mu, ExecMode::Serial);
  CHECK(res.lambda == doctest::Approx(std::log2(5.0 / 3.0)).epsilon(1e-15));
  CHECK(res.lambda == doctest::Approx(0.7369655941662062).epsilon(1e-12));
  CHECK(res.state.t(0));
  CHECK(res.state.r(1));
  CHECK(res.state.t(2));
  CHECK(res.state.r(3));
}

TEST_CASE("state space size is the product of per-node state counts") {
  SimConfig cfg;
  cfg.n_pairs = 2;
  const auto fd = random_instance(1, cfg);
  const auto hd = random_instance(1, cfg, Duplex::HalfDuplex);
  const WeightVector mu = WeightVector::uniform(4);

  CHECK(brute_force_slot(fd.chan, fd.topo, 1.0, mu, ExecMode::Serial).states_evaluated == 256);
  CHECK(brute_force_slot(hd.chan, hd.topo, 1.0, mu, ExecMode::Serial).states_evaluated == 81);
}

TEST_CASE("the all-zero channel resolves to the all-silent state") {
  const Topology topo = pair_topology(2);
  const ChannelRealization chan = manual_channel(topo, SquareMatrix(4));
  const WeightVector mu = WeightVector::uniform(4);
  const OracleResult res = brute_force_slot(chan, topo, 1.0, mu, ExecMode::Serial);
  CHECK(res.lambda == 0.0);
  for (int k = 0; k < 4; ++k) CHECK(res.state.s(k));
}

TEST_CASE("no single state flip improves the exhaustive optimum") {
  SimConfig cfg;
  cfg.n_pairs = 2;
  cfg.tx_power_dbm = 12.7;
  for (std::uint64_t seed = 40; seed < 55; ++seed) {
    const auto inst = random_instance(seed, cfg);
    const WeightVector mu = WeightVector::uniform(4);
    const double p = cfg.effective_power();
    const OracleResult res = brute_force_slot(inst.chan, inst.topo, p, mu, ExecMode::Serial);

    const int n = inst.topo.node_count();
    for (int k = 0; k < n; ++k) {
      for (int alt = 0; alt < 4; ++alt) {
        std::vector<std::uint8_t> r = res.state.r_vec(), t = res.state.t_vec(),
                                  f = res.state.f_vec(), s = res.state.s_vec();
        r[k] = alt == 0;
        t[k] = alt == 1;
        f[k] = alt == 2;
        s[k] = alt == 3;
        const ScheduleState flipped =
            ScheduleState::create(std::move(r), std::move(t), std::move(f), std::move(s),
                                  inst.topo);
        const RateRecord rec = weighted_sum_rate(flipped, inst.chan, p, mu);
        CHECK(rec.lambda <= res.lambda + 1e-12);
      }
    }
  }
}

TEST_CASE("serial and parallel searches agree exactly") {
  SimConfig cfg;
  cfg.n_pairs = 3;
  cfg.tx_power_dbm = 12.7;
  for (std::uint64_t seed = 70; seed < 78; ++seed) {
    const auto inst = random_instance(seed, cfg);
    const WeightVector mu = WeightVector::inverse_index(6);
    const double p = cfg.effective_power();
    const OracleResult a = brute_force_slot(inst.chan, inst.topo, p, mu, ExecMode::Serial);
    const OracleResult b = brute_force_slot(inst.chan, inst.topo, p, mu, ExecMode::OpenMp);
    CHECK(a.lambda == b.lambda);
    CHECK(a.state == b.state);
    CHECK(a.states_evaluated == b.states_evaluated);
  }
}

TEST_CASE("the node cap refuses oversized searches") {
  SimConfig cfg;
  cfg.n_pairs = 7;  // 14 nodes > default cap 12
  const auto inst = random_instance(2, cfg);
  const WeightVector mu = WeightVector::uniform(14);
  CHECK_THROWS((void)brute_force_slot(inst.chan, inst.topo, 1.0, mu, ExecMode::Serial));
  // An explicit larger cap admits the same instance.
  CHECK_NOTHROW(
      (void)brute_force_slot(inst.chan, inst.topo, 1.0, mu, ExecMode::Serial, 14));
}

TEST_CASE("gap report rows are consistent and dominated") {
  SimConfig cfg;
  cfg.n_pairs = 2;
  cfg.seed = 91;
  cfg.tx_power_dbm = 12.7;
  SolverConfig solver;
  const GapReport rep = oracle_gap_report(6, cfg, solver, 91, ExecMode::Serial);

  REQUIRE(rep.rows.size() == 6);
  CHECK(rep.all_dominated());
  for (const GapRow& row : rep.rows) {
    CHECK(row.lambda_alg <= row.lambda_oracle);
    if (row.lambda_oracle > 0.0) {
      CHECK(row.ratio == doctest::Approx(row.lambda_alg / row.lambda_oracle).epsilon(1e-15));
    }
    CHECK(row.iters_alg >= 1);
    CHECK(row.iters_alg <= solver.max_iters);
  }
  CHECK(rep.mean_ratio() > 0.0);
  CHECK(rep.fraction_ratio_at_least(0.0) == 1.0);

  // Same seed, parallel mode: identical values.
  const GapReport rep2 = oracle_gap_report(6, cfg, solver, 91, ExecMode::OpenMp);
  REQUIRE(rep2.rows.size() == 6);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].lambda_alg == rep2.rows[i].lambda_alg);
    CHECK(rep.rows[i].lambda_oracle == rep2.rows[i].lambda_oracle);
    CHECK(rep.rows[i].instance_seed == rep2.rows[i].instance_seed);
  }
}
