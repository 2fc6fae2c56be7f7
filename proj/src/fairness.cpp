#include "dtdd/fairness.hpp"

#include <stdexcept>

namespace dtdd {

void FairnessConfig::validate() const {
  if (!(step_c > 0.0) || !(step_d > 0.0)) {
    throw ConfigError("fairness step constants must be positive");
  }
  if (update_sign != 1.0 && update_sign != -1.0) {
    throw ConfigError("fairness update_sign must be +1 or -1");
  }
}

FairnessState FairnessState::initial(std::vector<double> mu0, std::vector<double> tau,
                                     std::vector<double> alpha) {
  const std::size_t n = mu0.size();
  if (n == 0 || tau.size() != n || alpha.size() != n) {
    throw std::invalid_argument("fairness state vectors must share a positive length");
  }
  for (double v : tau) {
    if (!(v >= 0.0)) throw std::invalid_argument("demands must be nonnegative");
  }
  for (double v : alpha) {
    if (!(v >= 0.0)) throw std::invalid_argument("adaptation gains must be nonnegative");
  }
  FairnessState st;
  st.mu = WeightVector(std::move(mu0)).values();
  st.r_bar_e.assign(n, 0.0);
  st.tau = std::move(tau);
  st.alpha = std::move(alpha);
  st.last_slot = 0;
  return st;
}

void update_rate_estimate(FairnessState& st, long i, std::span<const double> achieved) {
  if (i < 1) throw std::invalid_argument("slot index must be >= 1");
  if (i != st.last_slot + 1) throw std::invalid_argument("slots must be absorbed in order");
  if (achieved.size() != st.r_bar_e.size()) {
    throw std::invalid_argument("achieved rate vector length mismatch");
  }
  const double di = static_cast<double>(i);
  for (std::size_t k = 0; k < st.r_bar_e.size(); ++k) {
    // Incremental form of the running mean ((i-1)/i)*prev + new/i; exact at the
    // fixed point (a constant input reproduces itself bit-for-bit).
    st.r_bar_e[k] += (achieved[k] - st.r_bar_e[k]) / di;
  }
  st.last_slot = i;
}

void update_mu(FairnessState& st, long i, const FairnessConfig& cfg) {
  if (i < 1) throw std::invalid_argument("slot index must be >= 1");
  cfg.validate();
  const double delta = cfg.step_c / (cfg.step_d * static_cast<double>(i));
  double sum = 0.0;
  for (std::size_t k = 0; k < st.mu.size(); ++k) {
    double v = st.mu[k] + delta * cfg.update_sign * st.alpha[k] * (st.r_bar_e[k] - st.tau[k]);
    if (v < 0.0) v = 0.0;
    st.mu[k] = v;
    sum += v;
  }
  if (sum > 0.0) {
    for (double& v : st.mu) v /= sum;
    st.last_update_reset = false;
  } else {
    const double uniform = 1.0 / static_cast<double>(st.mu.size());
    for (double& v : st.mu) v = uniform;
    st.last_update_reset = true;
  }
}

std::vector<FairnessTraceRow> run_fairness_loop(const Topology& topo, const SimConfig& cfg,
                                                const SolverConfig& solver,
                                                const FairnessConfig& fair,
                                                std::vector<double> tau, std::vector<double> alpha,
                                                long n_slots, std::uint64_t seed) {
  if (n_slots < 1) throw std::invalid_argument("fairness loop needs at least one slot");
  const int n = topo.node_count();
  fair.validate();
  solver.validate();
  const double p_eff = cfg.effective_power();

  FairnessState st = FairnessState::initial(WeightVector::uniform(n).values(), std::move(tau),
                                            std::move(alpha));
  std::vector<FairnessTraceRow> trace;
  trace.reserve(static_cast<std::size_t>(n_slots) * n);

  for (long i = 1; i <= n_slots; ++i) {
    Rng chan_rng = make_channel_rng(seed, i);
    const ChannelRealization chan = draw_channels(topo, cfg, i, chan_rng);
    const WeightVector mu(st.mu);
    Rng solver_rng = Rng::substream(mix_streams(seed, stream_tag::kSolver),
                                    static_cast<std::uint64_t>(i));
    const SolveResult sol = optimize_slot(chan, topo, p_eff, mu, solver, solver_rng);
    const RateRecord rec = weighted_sum_rate(sol.state, chan, p_eff, mu);

    update_rate_estimate(st, i, rec.per_node_rate);
    update_mu(st, i, fair);

    for (int k = 0; k < n; ++k) {
      FairnessTraceRow row;
      row.slot = i;
      row.node = k;
      row.mu = st.mu[k];
      row.r_bar_e = st.r_bar_e[k];
      row.tau = st.tau[k];
      row.achieved_rate = rec.per_node_rate[k];
      trace.push_back(row);
    }
  }
  return trace;
}

}  // namespace dtdd
