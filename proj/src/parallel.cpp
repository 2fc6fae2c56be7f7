#include "dtdd/parallel.hpp"

#include <stdexcept>

namespace dtdd {

namespace {

SlotOutcome simulate_one_slot(const Topology& topo, const SimConfig& cfg,
                              const SolverConfig& solver, const WeightVector& mu,
                              SlotScheduler scheduler, long slot, std::uint64_t seed) {
  Rng chan_rng = make_channel_rng(seed, slot);
  const ChannelRealization chan = draw_channels(topo, cfg, slot, chan_rng);
  const double p_eff = cfg.effective_power();

  SlotOutcome out;
  switch (scheduler) {
    case SlotScheduler::Proposed: {
      Rng solver_rng = Rng::substream(mix_streams(seed, stream_tag::kSolver),
                                      static_cast<std::uint64_t>(slot));
      const SolveResult sol = optimize_slot(chan, topo, p_eff, mu, solver, solver_rng);
      out.record = weighted_sum_rate(sol.state, chan, p_eff, mu);
      out.converged = sol.converged;
      out.iters = sol.iters;
      break;
    }
    case SlotScheduler::Bs1:
      out.record = weighted_sum_rate(bs1_schedule(topo, slot), chan, p_eff, mu);
      break;
    case SlotScheduler::Bs3:
      out.record = weighted_sum_rate(bs3_schedule(topo, slot), chan, p_eff, mu);
      break;
  }
  return out;
}

}  // namespace

std::vector<SlotOutcome> run_schedule_slots(const Topology& topo, const SimConfig& cfg,
                                            const SolverConfig& solver, const WeightVector& mu,
                                            SlotScheduler scheduler, long first_slot, long n_slots,
                                            std::uint64_t seed, ExecMode mode) {
  if (n_slots < 1) throw std::invalid_argument("run_schedule_slots needs at least one slot");
  // Surface scheduler preconditions before entering the parallel region.
  if (scheduler == SlotScheduler::Bs1 && !topo.perfectly_paired()) {
    throw std::invalid_argument("bs1_schedule requires a perfectly paired topology");
  }
  if (scheduler == SlotScheduler::Bs3 && topo.any_hd()) {
    throw std::invalid_argument("bs3_schedule requires all nodes to be full-duplex");
  }

  std::vector<SlotOutcome> outcomes(static_cast<std::size_t>(n_slots));
  if (mode == ExecMode::Serial) {
    for (long idx = 0; idx < n_slots; ++idx) {
      outcomes[static_cast<std::size_t>(idx)] =
          simulate_one_slot(topo, cfg, solver, mu, scheduler, first_slot + idx, seed);
    }
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long idx = 0; idx < n_slots; ++idx) {
      outcomes[static_cast<std::size_t>(idx)] =
          simulate_one_slot(topo, cfg, solver, mu, scheduler, first_slot + idx, seed);
    }
  }
  return outcomes;
}

}  // namespace dtdd
