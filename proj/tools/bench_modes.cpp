// Timing comparison of the serial and OpenMP execution paths for slot batches
// and for the exhaustive search. Prints a small table; numbers vary by machine.
#include <chrono>
#include <cstdio>

#include "dtdd/harness.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_slots(const dtdd::Topology& topo, const dtdd::SimConfig& sim,
                  const dtdd::SolverConfig& solver, const dtdd::WeightVector& mu, long n_slots,
                  dtdd::ExecMode mode) {
  const auto start = clock_type::now();
  (void)dtdd::run_schedule_slots(topo, sim, solver, mu, dtdd::SlotScheduler::Proposed, 1, n_slots,
                                 sim.seed, mode);
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

double time_oracle(const dtdd::ChannelRealization& chan, const dtdd::Topology& topo, double p_eff,
                   const dtdd::WeightVector& mu, dtdd::ExecMode mode) {
  const auto start = clock_type::now();
  (void)dtdd::brute_force_slot(chan, topo, p_eff, mu, mode);
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

}  // namespace

int main() {
  dtdd::SimConfig sim;
  sim.n_pairs = 8;
  sim.seed = 7;
  dtdd::SolverConfig solver;
  const long n_slots = 200;

  dtdd::Rng topo_rng = dtdd::Rng::substream(sim.seed, dtdd::stream_tag::kTopology);
  const dtdd::Topology topo = dtdd::generate_topology(sim, topo_rng);
  const dtdd::WeightVector mu = dtdd::WeightVector::uniform(topo.node_count());

  std::printf("%-28s %12s %12s %8s\n", "workload", "serial ms", "openmp ms", "speedup");

  const double slot_serial = time_slots(topo, sim, solver, mu, n_slots, dtdd::ExecMode::Serial);
  const double slot_omp = time_slots(topo, sim, solver, mu, n_slots, dtdd::ExecMode::OpenMp);
  std::printf("%-28s %12.2f %12.2f %8.2f\n", "slot batch (16 nodes, 200)", slot_serial, slot_omp,
              slot_serial / slot_omp);

  dtdd::SimConfig osim = sim;
  osim.n_pairs = 6;
  dtdd::Rng orng = dtdd::Rng::substream(osim.seed, dtdd::stream_tag::kTopology);
  const dtdd::Topology otopo = dtdd::generate_topology(osim, orng);
  dtdd::Rng chan_rng = dtdd::make_channel_rng(osim.seed, 1);
  const dtdd::ChannelRealization chan = dtdd::draw_channels(otopo, osim, 1, chan_rng);
  const dtdd::WeightVector omu = dtdd::WeightVector::uniform(otopo.node_count());

  const double or_serial = time_oracle(chan, otopo, osim.effective_power(), omu,
                                       dtdd::ExecMode::Serial);
  const double or_omp = time_oracle(chan, otopo, osim.effective_power(), omu,
                                    dtdd::ExecMode::OpenMp);
  std::printf("%-28s %12.2f %12.2f %8.2f\n", "exhaustive search (12 nodes)", or_serial, or_omp,
              or_serial / or_omp);
  return 0;
}
