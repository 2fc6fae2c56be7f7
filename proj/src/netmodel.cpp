#include "dtdd/netmodel.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace dtdd {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::string duplex_name(Duplex d) {
  return d == Duplex::FullDuplex ? "fd" : "hd";
}

Duplex duplex_from_name(const std::string& s) {
  if (s == "fd") return Duplex::FullDuplex;
  if (s == "hd") return Duplex::HalfDuplex;
  throw ConfigError("unknown duplex value '" + s + "' (expected \"fd\" or \"hd\")");
}

}  // namespace

Topology::Topology(std::vector<NodeSpec> nodes, std::vector<std::pair<int, int>> desired_links)
    : nodes_(std::move(nodes)), desired_links_(std::move(desired_links)) {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw ConfigError("topology must contain at least one node");
  for (int k = 0; k < n; ++k) {
    if (nodes_[k].id != k) {
      throw ConfigError("node ids must be dense 0..K-1 in order");
    }
  }
  q_.assign(static_cast<std::size_t>(n) * n, 0);
  partners_.assign(n, {});
  for (const auto& [j, k] : desired_links_) {
    if (j < 0 || j >= n || k < 0 || k >= n) {
      throw ConfigError("desired link references unknown node id");
    }
    if (j == k) throw ConfigError("desired link may not be a self loop");
    auto& cell = q_[static_cast<std::size_t>(j) * n + k];
    if (cell != 0) throw ConfigError("duplicate desired link");
    cell = 1;
  }
  for (int x = 0; x < n; ++x) {
    for (int j = 0; j < n; ++j) {
      if (desired(j, x)) partners_[x].push_back(j);
    }
  }
}

bool Topology::any_hd() const {
  for (const auto& node : nodes_) {
    if (node.duplex == Duplex::HalfDuplex) return true;
  }
  return false;
}

bool Topology::perfectly_paired() const {
  const int n = node_count();
  for (int x = 0; x < n; ++x) {
    if (partners_[x].size() != 1) return false;
    const int p = partners_[x][0];
    if (p == x || partners_[p].size() != 1 || partners_[p][0] != x) return false;
  }
  return true;
}

double Topology::distance(int j, int k) const {
  const double dx = nodes_[j].x_m - nodes_[k].x_m;
  const double dy = nodes_[j].y_m - nodes_[k].y_m;
  return std::hypot(dx, dy);
}

Topology Topology::with_uniform_duplex(Duplex d) const {
  return with_duplex(std::vector<Duplex>(nodes_.size(), d));
}

Topology Topology::with_duplex(const std::vector<Duplex>& per_node) const {
  if (per_node.size() != nodes_.size()) {
    throw ConfigError("duplex vector length does not match node count");
  }
  std::vector<NodeSpec> nodes = nodes_;
  for (std::size_t k = 0; k < nodes.size(); ++k) nodes[k].duplex = per_node[k];
  return Topology(std::move(nodes), desired_links_);
}

nlohmann::json Topology::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : nodes_) {
    nodes.push_back({{"id", node.id},
                     {"x_m", node.x_m},
                     {"y_m", node.y_m},
                     {"duplex", duplex_name(node.duplex)}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const auto& [j, k] : desired_links_) links.push_back({j, k});
  return {{"nodes", nodes}, {"desired_links", links}};
}

Topology Topology::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("desired_links")) {
    throw ConfigError("topology json must contain \"nodes\" and \"desired_links\"");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "nodes" && key != "desired_links") {
      throw ConfigError("unknown key in topology json: '" + key + "'");
    }
  }
  std::vector<NodeSpec> nodes;
  for (const auto& jn : j.at("nodes")) {
    NodeSpec node;
    for (const auto& [key, value] : jn.items()) {
      (void)value;
      if (key != "id" && key != "x_m" && key != "y_m" && key != "duplex") {
        throw ConfigError("unknown key in topology node: '" + key + "'");
      }
    }
    node.id = jn.at("id").get<int>();
    node.x_m = jn.at("x_m").get<double>();
    node.y_m = jn.at("y_m").get<double>();
    node.duplex = duplex_from_name(jn.at("duplex").get<std::string>());
    nodes.push_back(node);
  }
  std::vector<std::pair<int, int>> links;
  for (const auto& jl : j.at("desired_links")) {
    if (!jl.is_array() || jl.size() != 2) {
      throw ConfigError("desired link entries must be [j, k] pairs");
    }
    links.emplace_back(jl[0].get<int>(), jl[1].get<int>());
  }
  return Topology(std::move(nodes), std::move(links));
}

void SimConfig::validate() const {
  if (!(area_side_m > 0.0)) throw ConfigError("area_side_m must be positive");
  if (n_pairs < 1) throw ConfigError("n_pairs must be at least 1");
  if (!(pair_dist_min_m > 0.0)) throw ConfigError("pair_dist_min_m must be positive");
  if (!(pair_dist_max_m >= pair_dist_min_m)) {
    throw ConfigError("pair_dist_max_m must be >= pair_dist_min_m");
  }
  if (!(pair_dist_max_m <= area_side_m)) {
    throw ConfigError("pair_dist_max_m must not exceed area_side_m");
  }
  if (!(carrier_hz > 0.0)) throw ConfigError("carrier_hz must be positive");
  if (!(pathloss_exp > 2.0)) throw ConfigError("pathloss_exp must exceed 2");
  if (!(si_suppression_db >= 0.0)) throw ConfigError("si_suppression_db must be >= 0");
  if (n_slots < 1) throw ConfigError("n_slots must be at least 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
}

double SimConfig::effective_power() const {
  return std::pow(10.0, (tx_power_dbm - noise_floor_dbm) / 10.0);
}

nlohmann::json SimConfig::to_json() const {
  return {{"area_side_m", area_side_m},
          {"n_pairs", n_pairs},
          {"pair_dist_min_m", pair_dist_min_m},
          {"pair_dist_max_m", pair_dist_max_m},
          {"carrier_hz", carrier_hz},
          {"pathloss_exp", pathloss_exp},
          {"si_suppression_db", si_suppression_db},
          {"tx_power_dbm", tx_power_dbm},
          {"noise_floor_dbm", noise_floor_dbm},
          {"n_slots", n_slots},
          {"seed", seed},
          {"epsilon", epsilon},
          {"max_iters", max_iters}};
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a json object");
  static const std::set<std::string> known = {
      "area_side_m",   "n_pairs",     "pair_dist_min_m", "pair_dist_max_m",
      "carrier_hz",    "pathloss_exp", "si_suppression_db", "tx_power_dbm",
      "noise_floor_dbm", "n_slots",   "seed",            "epsilon",
      "max_iters",     "solver",      "experiment"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown config key: '" + key + "'");
  }
  SimConfig cfg;
  auto load = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  load("area_side_m", cfg.area_side_m);
  load("n_pairs", cfg.n_pairs);
  load("pair_dist_min_m", cfg.pair_dist_min_m);
  load("pair_dist_max_m", cfg.pair_dist_max_m);
  load("carrier_hz", cfg.carrier_hz);
  load("pathloss_exp", cfg.pathloss_exp);
  load("si_suppression_db", cfg.si_suppression_db);
  load("tx_power_dbm", cfg.tx_power_dbm);
  load("noise_floor_dbm", cfg.noise_floor_dbm);
  load("n_slots", cfg.n_slots);
  load("seed", cfg.seed);
  load("epsilon", cfg.epsilon);
  load("max_iters", cfg.max_iters);
  cfg.validate();
  return cfg;
}

double mean_pathloss_gain(double distance_m, const SimConfig& cfg) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("mean_pathloss_gain requires a positive distance");
  }
  const double amp = kSpeedOfLight / (4.0 * std::numbers::pi * cfg.carrier_hz);
  return amp * amp * std::pow(distance_m, -cfg.pathloss_exp);
}

Topology generate_topology(const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const double side = cfg.area_side_m;
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<int, int>> links;
  nodes.reserve(static_cast<std::size_t>(cfg.n_pairs) * 2);
  for (int p = 0; p < cfg.n_pairs; ++p) {
    NodeSpec a;
    a.id = 2 * p;
    a.x_m = rng.uniform(0.0, side);
    a.y_m = rng.uniform(0.0, side);
    NodeSpec b;
    b.id = 2 * p + 1;
    for (;;) {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double dist = rng.uniform(cfg.pair_dist_min_m, cfg.pair_dist_max_m);
      b.x_m = a.x_m + dist * std::cos(angle);
      b.y_m = a.y_m + dist * std::sin(angle);
      if (b.x_m >= 0.0 && b.x_m <= side && b.y_m >= 0.0 && b.y_m <= side) break;
    }
    nodes.push_back(a);
    nodes.push_back(b);
    links.emplace_back(a.id, b.id);
    links.emplace_back(b.id, a.id);
  }
  return Topology(std::move(nodes), std::move(links));
}

ChannelRealization draw_channels(const Topology& topo, const SimConfig& cfg, long slot, Rng& rng) {
  const int n = topo.node_count();
  const double si_mean = std::pow(10.0, -cfg.si_suppression_db / 10.0);
  ChannelRealization chan;
  chan.slot = slot;
  chan.g = SquareMatrix(n);
  chan.d = SquareMatrix(n);
  chan.i_mat = SquareMatrix(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double mean;
      if (j == k) {
        mean = topo.is_hd(k) ? 0.0 : si_mean;
      } else {
        mean = mean_pathloss_gain(topo.distance(j, k), cfg);
      }
      const double gain = rng.exponential(mean);
      chan.g.at(j, k) = gain;
      if (topo.desired(j, k)) {
        chan.d.at(j, k) = gain;
      } else {
        chan.i_mat.at(j, k) = gain;
      }
    }
  }
  return chan;
}

Rng make_channel_rng(std::uint64_t seed, long slot) {
  return Rng::substream(mix_streams(seed, stream_tag::kChannel), static_cast<std::uint64_t>(slot));
}

}  // namespace dtdd
