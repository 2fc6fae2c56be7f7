#pragma once

#include "dtdd/ratecore.hpp"

namespace dtdd {

// Alternating fixed schedule for paired topologies: in odd slots the first node of
// every pair transmits and its partner receives, in even slots the roles swap.
// Slots are 1-based. Errors when the topology is not perfectly paired.
ScheduleState bs1_schedule(const Topology& topo, long slot);

// Always-on full-duplex schedule: every node takes the simultaneous state in every
// slot. Errors when any node is half-duplex.
ScheduleState bs3_schedule(const Topology& topo, long slot);

}  // namespace dtdd
