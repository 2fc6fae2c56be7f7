#pragma once

#include <cstdint>
#include <vector>

#include "dtdd/exec.hpp"
#include "dtdd/fpsched.hpp"

namespace dtdd {

struct OracleResult {
  ScheduleState state;
  double lambda = 0.0;
  // Number of joint states evaluated (product of per-node state counts).
  std::uint64_t states_evaluated = 0;
};

// Exhaustive search over all joint one-hot states (4 per full-duplex node, 3 per
// half-duplex node). Ties on the objective pick the lexicographically smallest
// (t, f, r, s) encoding, so the result is unique and independent of enumeration
// order and thread count. Refuses node counts above node_cap.
OracleResult brute_force_slot(const ChannelRealization& chan, const Topology& topo, double p_eff,
                              const WeightVector& mu, ExecMode mode = ExecMode::OpenMp,
                              int node_cap = 12);

struct GapRow {
  std::uint64_t instance_seed = 0;
  double lambda_alg = 0.0;
  double lambda_oracle = 0.0;
  double ratio = 1.0;
  int iters_alg = 0;
  long long time_alg_us = 0;
  long long time_oracle_us = 0;
  bool converged = false;
  bool dominated = true;  // lambda_alg <= lambda_oracle, exact comparison
};

struct GapReport {
  std::vector<GapRow> rows;

  double mean_ratio() const;
  double fraction_ratio_at_least(double threshold) const;
  double fraction_converged() const;
  bool all_dominated() const;
};

// Matched comparison of the iterative solver against the exhaustive oracle on
// n_instances freshly drawn topologies (slot-0 channel each), all derived from the
// given seed. Weights are uniform.
GapReport oracle_gap_report(int n_instances, const SimConfig& cfg, const SolverConfig& solver,
                            std::uint64_t seed, ExecMode mode = ExecMode::OpenMp);

}  // namespace dtdd
