#pragma once

#include <cstdint>
#include <vector>

#include "dtdd/benchmarks.hpp"
#include "dtdd/exec.hpp"
#include "dtdd/fpsched.hpp"

namespace dtdd {

enum class SlotScheduler { Proposed, Bs1, Bs3 };

struct SlotOutcome {
  RateRecord record;
  bool converged = true;
  int iters = 0;
};

// Simulates slots first_slot .. first_slot + n_slots - 1 for one topology drop.
// Every slot draws its own channel substream and (for the proposed scheduler) its
// own solver substream from the seed, so the result vector is identical for both
// execution modes and any thread count, and independent of processing order.
std::vector<SlotOutcome> run_schedule_slots(const Topology& topo, const SimConfig& cfg,
                                            const SolverConfig& solver, const WeightVector& mu,
                                            SlotScheduler scheduler, long first_slot, long n_slots,
                                            std::uint64_t seed, ExecMode mode);

}  // namespace dtdd
