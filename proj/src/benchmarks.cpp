#include "dtdd/benchmarks.hpp"

#include <stdexcept>

namespace dtdd {

ScheduleState bs1_schedule(const Topology& topo, long slot) {
  if (!topo.perfectly_paired()) {
    throw std::invalid_argument("bs1_schedule requires a perfectly paired topology");
  }
  const std::size_t n = static_cast<std::size_t>(topo.node_count());
  std::vector<std::uint8_t> r(n, 0), t(n, 0), f(n, 0), s(n, 0);
  const bool odd = (slot % 2) != 0;
  for (int x = 0; x < static_cast<int>(n); ++x) {
    const bool first_of_pair = x < topo.partners_of(x)[0];
    const bool transmits = odd ? first_of_pair : !first_of_pair;
    (transmits ? t[x] : r[x]) = 1;
  }
  return ScheduleState::create(std::move(r), std::move(t), std::move(f), std::move(s), topo);
}

ScheduleState bs3_schedule(const Topology& topo, long slot) {
  (void)slot;
  if (topo.any_hd()) {
    throw std::invalid_argument("bs3_schedule requires all nodes to be full-duplex");
  }
  const std::size_t n = static_cast<std::size_t>(topo.node_count());
  return ScheduleState::create(std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0),
                               std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 0),
                               topo);
}

}  // namespace dtdd
