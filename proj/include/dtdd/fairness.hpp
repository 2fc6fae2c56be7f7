#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dtdd/fpsched.hpp"

namespace dtdd {

struct FairnessConfig {
  // Step size delta(i) = step_c / (step_d * i); the default 1/(2i) is square-
  // summable-free and summable-divergent over the horizon.
  double step_c = 1.0;
  double step_d = 2.0;
  // -1 steers weights up when a node runs below its demand (negative feedback);
  // +1 selects the literal positive-feedback form.
  double update_sign = -1.0;

  void validate() const;
};

// Running state of the demand-tracking weight adaptation.
struct FairnessState {
  std::vector<double> mu;       // current priorities, simplex
  std::vector<double> r_bar_e;  // running average of achieved rates
  std::vector<double> tau;      // per-node demands (rate targets)
  std::vector<double> alpha;    // per-node adaptation gains
  long last_slot = 0;           // index i of the latest absorbed slot
  bool last_update_reset = false;  // true when clamping zeroed all weights and the
                                   // update fell back to uniform

  static FairnessState initial(std::vector<double> mu0, std::vector<double> tau,
                               std::vector<double> alpha);
};

// Recursive running mean: r_bar_e(i) = ((i-1)/i) r_bar_e(i-1) + (1/i) achieved(i).
// Slots are 1-based and must be absorbed in order.
void update_rate_estimate(FairnessState& st, long i, std::span<const double> achieved);

// mu_k <- mu_k + delta(i) * sign * alpha_k * (r_bar_e_k - tau_k), clamped at zero
// and renormalized to the simplex. If clamping zeroes every weight the update
// resets to uniform and flags last_update_reset.
void update_mu(FairnessState& st, long i, const FairnessConfig& cfg);

struct FairnessTraceRow {
  long slot = 0;
  int node = 0;
  double mu = 0.0;
  double r_bar_e = 0.0;
  double tau = 0.0;
  double achieved_rate = 0.0;
};

// Closed loop over n_slots slots: draw channel, schedule with the current weights,
// absorb the achieved rates, adapt the weights. Returns one trace row per
// (slot, node).
std::vector<FairnessTraceRow> run_fairness_loop(const Topology& topo, const SimConfig& cfg,
                                                const SolverConfig& solver,
                                                const FairnessConfig& fair,
                                                std::vector<double> tau, std::vector<double> alpha,
                                                long n_slots, std::uint64_t seed);

}  // namespace dtdd
