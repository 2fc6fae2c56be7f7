#pragma once

#include <utility>
#include <vector>

#include "dtdd/netmodel.hpp"

namespace dtdd::testing {

// n_pairs mutually-desiring pairs (2i, 2i+1) on a unit grid; positions only matter
// for topology-IO tests, gains are always set by hand here.
inline Topology pair_topology(int n_pairs, Duplex duplex = Duplex::FullDuplex) {
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<int, int>> links;
  for (int p = 0; p < n_pairs; ++p) {
    const int a = 2 * p, b = 2 * p + 1;
    nodes.push_back({a, static_cast<double>(p), 0.0, duplex});
    nodes.push_back({b, static_cast<double>(p), 1.0, duplex});
    links.emplace_back(a, b);
    links.emplace_back(b, a);
  }
  return Topology(std::move(nodes), std::move(links));
}

// Channel with every entry of g given explicitly; d/i_mat are derived from the
// topology's desired relation so d + i_mat == g holds by construction.
inline ChannelRealization manual_channel(const Topology& topo, const SquareMatrix& g,
                                         long slot = 0) {
  const int n = topo.node_count();
  ChannelRealization chan;
  chan.slot = slot;
  chan.g = g;
  chan.d = SquareMatrix(n);
  chan.i_mat = SquareMatrix(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      (topo.desired(j, k) ? chan.d : chan.i_mat).at(j, k) = g.at(j, k);
    }
  }
  return chan;
}

// Random instance drawn exactly like the oracle-gap suite does.
struct RandomInstance {
  Topology topo;
  ChannelRealization chan;
};

inline RandomInstance random_instance(std::uint64_t instance_seed, const SimConfig& cfg,
                                      Duplex duplex = Duplex::FullDuplex) {
  Rng topo_rng = Rng::substream(instance_seed, stream_tag::kTopology);
  Topology topo = generate_topology(cfg, topo_rng).with_uniform_duplex(duplex);
  Rng chan_rng = make_channel_rng(instance_seed, 0);
  ChannelRealization chan = draw_channels(topo, cfg, 0, chan_rng);
  return {std::move(topo), std::move(chan)};
}

}  // namespace dtdd::testing
