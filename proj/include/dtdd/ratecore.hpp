#pragma once

#include <span>
#include <vector>

#include "dtdd/netmodel.hpp"

namespace dtdd {

// Per-slot node states: every node is exactly one of receive / transmit /
// full-duplex (simultaneous transmit and receive) / silent. Construction enforces
// the one-hot constraint and forbids the full-duplex state on half-duplex nodes,
// so an invalid state cannot exist.
class ScheduleState {
 public:
  static ScheduleState create(std::vector<std::uint8_t> r, std::vector<std::uint8_t> t,
                              std::vector<std::uint8_t> f, std::vector<std::uint8_t> s,
                              const Topology& topo);

  static ScheduleState all_silent(const Topology& topo);

  int node_count() const { return static_cast<int>(r_.size()); }

  bool r(int k) const { return r_[k] != 0; }
  bool t(int k) const { return t_[k] != 0; }
  bool f(int k) const { return f_[k] != 0; }
  bool s(int k) const { return s_[k] != 0; }

  // Node k radiates this slot.
  bool transmitting(int k) const { return t_[k] != 0 || f_[k] != 0; }
  // Node k listens this slot.
  bool receiving(int k) const { return r_[k] != 0 || f_[k] != 0; }

  const std::vector<std::uint8_t>& r_vec() const { return r_; }
  const std::vector<std::uint8_t>& t_vec() const { return t_; }
  const std::vector<std::uint8_t>& f_vec() const { return f_; }
  const std::vector<std::uint8_t>& s_vec() const { return s_; }

  friend bool operator==(const ScheduleState& a, const ScheduleState& b) {
    return a.r_ == b.r_ && a.t_ == b.t_ && a.f_ == b.f_ && a.s_ == b.s_;
  }

 private:
  ScheduleState() = default;
  std::vector<std::uint8_t> r_, t_, f_, s_;
};

// Nonnegative per-node priority weights, normalized to sum to one on construction.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);
  static WeightVector uniform(int n);
  // Decaying priorities mu_k proportional to 1/(k+1), normalized.
  static WeightVector inverse_index(int n);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int k) const { return w_[k]; }
  const std::vector<double>& values() const { return w_; }

 private:
  std::vector<double> w_;
};

struct RateRecord {
  long slot = 0;
  std::vector<double> per_node_rate;
  double lambda = 0.0;
};

// Achievable rate of node k for the given joint state and channel realization,
// in bits per slot: log2(1 + [r_k+f_k] * P * sum_active d / (1 + P * sum_active i)).
double per_node_rate(const ScheduleState& state, const ChannelRealization& chan, double p_eff,
                     int k);

RateRecord weighted_sum_rate(const ScheduleState& state, const ChannelRealization& chan,
                             double p_eff, const WeightVector& mu);

// Arithmetic mean of per-node rates over the records. Summation happens in sorted
// value order, so the result is bit-identical for any permutation of the records.
std::vector<double> average_rates(std::span<const RateRecord> records);

}  // namespace dtdd
