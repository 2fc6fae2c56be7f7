#pragma once

#include <cstdint>
#include <vector>

#include "dtdd/ratecore.hpp"

namespace dtdd {

// Guard constants for the degenerate cases of the iteration (silent network,
// sole-server links, structurally forbidden self-reception).
inline constexpr double kActivityTolerance = 1e-30;
inline constexpr double kDivisionTolerance = 1e-15;
inline constexpr double kLargeRatio = 1e30;
inline constexpr double kHdDiagSentinel = 1e30;

enum class UpdateRule { Jacobi, GaussSeidel };

struct SolverConfig {
  double epsilon = 1e-6;
  int max_iters = 100;
  int restarts = 3;
  UpdateRule update_rule = UpdateRule::Jacobi;

  void validate() const;
  // Parses the optional "solver" block {epsilon, max_iters, restarts, update_rule};
  // unknown keys rejected. Missing keys keep the given defaults.
  static SolverConfig from_json(const nlohmann::json& j, const SolverConfig& defaults);
  nlohmann::json to_json() const;
};

// One iteration snapshot of the transmit-side fractional-programming solve.
struct FpIterate {
  int n = 0;
  std::vector<std::uint8_t> t_vec;
  std::vector<double> w_vec;
  std::vector<double> l_vec;
  double lambda_n = 0.0;
};

struct SolveResult {
  ScheduleState state;
  double lambda = 0.0;
  int iters = 0;
  bool converged = false;
  // Objective value per computed iteration of the restart that produced the
  // returned state.
  std::vector<double> trajectory;
};

// Auxiliary-variable update: w_x = (A_x + B_x) / sqrt(A_x) with A_x the received
// desired power and B_x the noise-plus-interference at x under transmit vector t.
// A_x below the activity tolerance yields the w_x = 0 sentinel.
std::vector<double> fp_update_w(const std::vector<std::uint8_t>& t, const ChannelRealization& chan,
                                double p_eff);

// Scale update: l_x = 1 / (|sqrt(A_x) - w_x|^2 + B_x).
std::vector<double> fp_update_l(const std::vector<std::uint8_t>& t, const std::vector<double>& w,
                                const ChannelRealization& chan, double p_eff);

// Thresholded stationarity update: t_x = 0 iff the marginal penalty S_x of
// enabling transmitter x is >= 0 (ties silence the node). Jacobi reads only the
// previous iterate; Gauss-Seidel applies fresh decisions within the sweep.
std::vector<std::uint8_t> fp_update_t(const FpIterate& prev, const ChannelRealization& chan,
                                      double p_eff, const WeightVector& mu,
                                      UpdateRule rule = UpdateRule::Jacobi);

// Weighted sum of log2(1 + A_k/B_k) under transmit vector t; drives the
// convergence check and best-iterate selection.
double transmit_objective(const std::vector<std::uint8_t>& t, const ChannelRealization& chan,
                          double p_eff, const WeightVector& mu);

// Expands a converged transmit vector into the full one-hot state: silent nodes
// with an active partner receive, lone transmitters keep t, and a full-duplex node
// transmitting toward an active partner is promoted to the simultaneous state.
// Half-duplex nodes never take the simultaneous state and keep t instead.
ScheduleState postprocess_states(const std::vector<std::uint8_t>& t, const Topology& topo);

// Copy of the channel with every self-loop gain replaced by the large sentinel;
// running the solver on it reproduces half-duplex behavior without duplex flags.
ChannelRealization hd_diag_transform(const ChannelRealization& chan);

// Per-slot state selection: random-restarted fractional-programming ascent over
// transmit vectors followed by state post-processing. Reported lambda is the true
// weighted sum rate of the returned state under the caller's channel.
SolveResult optimize_slot(const ChannelRealization& chan, const Topology& topo, double p_eff,
                          const WeightVector& mu, const SolverConfig& solver, Rng& rng);

}  // namespace dtdd
