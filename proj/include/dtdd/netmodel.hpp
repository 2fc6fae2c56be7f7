#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dtdd/matrix.hpp"
#include "dtdd/rng.hpp"

namespace dtdd {

enum class Duplex { FullDuplex, HalfDuplex };

struct NodeSpec {
  int id = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  Duplex duplex = Duplex::FullDuplex;
};

// Thrown for invalid configuration input (bad JSON, violated invariants, bad CLI
// values). The CLI maps it to exit code 1; runtime failures map to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Node set plus the desired-signal relation: a directed link (j, k) means node k
// treats node j's transmission as desired. Interference topology is the complement
// (including the self loop, which carries self-interference for full-duplex nodes).
class Topology {
 public:
  Topology(std::vector<NodeSpec> nodes, std::vector<std::pair<int, int>> desired_links);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& desired_links() const { return desired_links_; }

  bool desired(int j, int k) const { return q_[static_cast<std::size_t>(j) * nodes_.size() + k] != 0; }

  // Nodes whose transmissions node x treats as desired.
  const std::vector<int>& partners_of(int x) const { return partners_[x]; }

  bool is_hd(int k) const { return nodes_[k].duplex == Duplex::HalfDuplex; }
  bool any_hd() const;

  // True when every node has exactly one desired partner and the relation is mutual.
  bool perfectly_paired() const;

  double distance(int j, int k) const;

  Topology with_uniform_duplex(Duplex d) const;
  Topology with_duplex(const std::vector<Duplex>& per_node) const;

  nlohmann::json to_json() const;
  static Topology from_json(const nlohmann::json& j);

 private:
  std::vector<NodeSpec> nodes_;
  std::vector<std::pair<int, int>> desired_links_;
  std::vector<std::uint8_t> q_;
  std::vector<std::vector<int>> partners_;
};

struct SimConfig {
  double area_side_m = 1000.0;
  int n_pairs = 10;
  double pair_dist_min_m = 10.0;
  double pair_dist_max_m = 100.0;
  double carrier_hz = 1.9e9;
  double pathloss_exp = 3.6;
  double si_suppression_db = 110.0;
  double tx_power_dbm = 20.0;
  double noise_floor_dbm = -104.0;
  long n_slots = 200;
  std::uint64_t seed = 1;
  double epsilon = 1e-6;
  int max_iters = 100;

  void validate() const;

  // Transmit power normalized by the noise floor; rate formulas then use unit noise.
  double effective_power() const;

  nlohmann::json to_json() const;
  // Strict: unknown top-level keys are rejected. The reserved sub-objects "solver"
  // and "experiment" are left for their own parsers.
  static SimConfig from_json(const nlohmann::json& j);
};

// Per-slot block-fading realization. g is the full gain matrix, d its desired-link
// part (g masked by the partner relation) and i_mat the interference part (the
// complement mask, self loops included), so d + i_mat == g entrywise.
struct ChannelRealization {
  long slot = 0;
  SquareMatrix g;
  SquareMatrix d;
  SquareMatrix i_mat;
};

// Mean received power gain at the given distance: (c / (4 pi f_c))^2 * d^(-beta).
double mean_pathloss_gain(double distance_m, const SimConfig& cfg);

// Drops n_pairs transmitter/receiver pairs uniformly in the square; the partner is
// re-sampled (uniform angle, uniform distance in [pair_dist_min, pair_dist_max])
// until it lands inside the square. All nodes start full-duplex.
Topology generate_topology(const SimConfig& cfg, Rng& rng);

// Rayleigh block fading: every matrix entry is an independent exponential draw with
// the mean set by path loss (off-diagonal), the configured self-interference
// suppression (full-duplex diagonal) or zero (half-duplex diagonal). Exactly one
// draw is consumed per entry in row-major order, so substreams stay aligned across
// duplex choices.
ChannelRealization draw_channels(const Topology& topo, const SimConfig& cfg, long slot, Rng& rng);

// Canonical per-slot channel substream for a master seed.
Rng make_channel_rng(std::uint64_t seed, long slot);

}  // namespace dtdd
