#include "dtdd/ratecore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtdd {

ScheduleState ScheduleState::create(std::vector<std::uint8_t> r, std::vector<std::uint8_t> t,
                                    std::vector<std::uint8_t> f, std::vector<std::uint8_t> s,
                                    const Topology& topo) {
  const std::size_t n = static_cast<std::size_t>(topo.node_count());
  if (r.size() != n || t.size() != n || f.size() != n || s.size() != n) {
    throw std::invalid_argument("schedule state vectors must match the node count");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (r[k] > 1 || t[k] > 1 || f[k] > 1 || s[k] > 1) {
      throw std::invalid_argument("schedule state entries must be 0/1");
    }
    if (r[k] + t[k] + f[k] + s[k] != 1) {
      throw std::invalid_argument("each node must be in exactly one state");
    }
    if (f[k] != 0 && topo.is_hd(static_cast<int>(k))) {
      throw std::invalid_argument("half-duplex node cannot take the full-duplex state");
    }
  }
  ScheduleState state;
  state.r_ = std::move(r);
  state.t_ = std::move(t);
  state.f_ = std::move(f);
  state.s_ = std::move(s);
  return state;
}

ScheduleState ScheduleState::all_silent(const Topology& topo) {
  const std::size_t n = static_cast<std::size_t>(topo.node_count());
  return create(std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0),
                std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 1), topo);
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw std::invalid_argument("weight vector must be non-empty");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0)) throw std::invalid_argument("weights must be nonnegative and finite");
    sum += v;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("weights must not all be zero");
  for (double& v : w_) v /= sum;
}

WeightVector WeightVector::uniform(int n) {
  return WeightVector(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

WeightVector WeightVector::inverse_index(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[k] = 1.0 / (k + 1);
  return WeightVector(std::move(w));
}

double per_node_rate(const ScheduleState& state, const ChannelRealization& chan, double p_eff,
                     int k) {
  const int n = state.node_count();
  double num = 0.0;
  double den = 1.0;
  for (int v = 0; v < n; ++v) {
    if (!state.transmitting(v)) continue;
    num += chan.d.at(v, k);
    den += p_eff * chan.i_mat.at(v, k);
  }
  const double listen = state.receiving(k) ? 1.0 : 0.0;
  return std::log2(1.0 + listen * p_eff * num / den);
}

RateRecord weighted_sum_rate(const ScheduleState& state, const ChannelRealization& chan,
                             double p_eff, const WeightVector& mu) {
  const int n = state.node_count();
  if (mu.size() != n) throw std::invalid_argument("weight vector length must match node count");
  RateRecord rec;
  rec.slot = chan.slot;
  rec.per_node_rate.resize(static_cast<std::size_t>(n));
  rec.lambda = 0.0;
  for (int k = 0; k < n; ++k) {
    const double rate = per_node_rate(state, chan, p_eff, k);
    rec.per_node_rate[k] = rate;
    rec.lambda += mu[k] * rate;
  }
  return rec;
}

std::vector<double> average_rates(std::span<const RateRecord> records) {
  if (records.empty()) throw std::invalid_argument("average_rates requires at least one record");
  const std::size_t n = records.front().per_node_rate.size();
  for (const RateRecord& rec : records) {
    if (rec.per_node_rate.size() != n) {
      throw std::invalid_argument("rate records have inconsistent node counts");
    }
  }
  // Each node's values are summed in sorted order, so the average depends only on
  // the multiset of per-slot rates: permuting the records (replaying slots in a
  // different order) cannot move the result by even one bit.
  std::vector<double> avg(n, 0.0);
  std::vector<double> column(records.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < records.size(); ++i) column[i] = records[i].per_node_rate[k];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    avg[k] = sum / static_cast<double>(records.size());
  }
  return avg;
}

}  // namespace dtdd
