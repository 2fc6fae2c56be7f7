#include "dtdd/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dtdd {

namespace {

// Per-node state codes. Half-duplex nodes skip kF and use radix 3 with kS mapped
// down, so every counter value is a valid joint state.
enum Code : int { kR = 0, kT = 1, kF = 2, kS = 3 };

struct NodeCoding {
  int radix = 4;
  // code index -> Code value
  int map[4] = {kR, kT, kF, kS};
};

std::vector<NodeCoding> make_codings(const Topology& topo) {
  std::vector<NodeCoding> codings(static_cast<std::size_t>(topo.node_count()));
  for (int k = 0; k < topo.node_count(); ++k) {
    if (topo.is_hd(k)) {
      codings[k].radix = 3;
      codings[k].map[0] = kR;
      codings[k].map[1] = kT;
      codings[k].map[2] = kS;
    }
  }
  return codings;
}

// Mirrors per_node_rate / weighted_sum_rate arithmetic exactly (same accumulation
// order) so the optimum over all states upper-bounds any recomputed state value
// without floating-point slack.
double evaluate(const std::vector<int>& code, const ChannelRealization& chan, double p_eff,
                const WeightVector& mu) {
  const int n = static_cast<int>(code.size());
  double lambda = 0.0;
  for (int k = 0; k < n; ++k) {
    double num = 0.0;
    double den = 1.0;
    for (int v = 0; v < n; ++v) {
      if (code[v] != kT && code[v] != kF) continue;
      num += chan.d.at(v, k);
      den += p_eff * chan.i_mat.at(v, k);
    }
    const double listen = (code[k] == kR || code[k] == kF) ? 1.0 : 0.0;
    lambda += mu[k] * std::log2(1.0 + listen * p_eff * num / den);
  }
  return lambda;
}

// Lexicographic order on the concatenated (t, f, r, s) bit vectors; total order
// over distinct states, used only to break exact objective ties.
bool encoding_less(const std::vector<int>& a, const std::vector<int>& b) {
  const auto bit = [](const std::vector<int>& c, int field, int k) -> int {
    switch (field) {
      case 0: return c[k] == kT ? 1 : 0;
      case 1: return c[k] == kF ? 1 : 0;
      case 2: return c[k] == kR ? 1 : 0;
      default: return c[k] == kS ? 1 : 0;
    }
  };
  const int n = static_cast<int>(a.size());
  for (int field = 0; field < 4; ++field) {
    for (int k = 0; k < n; ++k) {
      const int av = bit(a, field, k);
      const int bv = bit(b, field, k);
      if (av != bv) return av < bv;
    }
  }
  return false;
}

struct Champion {
  double lambda = -1.0;
  std::vector<int> code;

  void consider(double lam, const std::vector<int>& cand) {
    if (code.empty() || lam > lambda || (lam == lambda && encoding_less(cand, code))) {
      lambda = lam;
      code = cand;
    }
  }
};

void decode(std::uint64_t idx, const std::vector<NodeCoding>& codings, std::vector<int>& out) {
  // Node 0 is the most significant digit.
  for (int k = static_cast<int>(codings.size()) - 1; k >= 0; --k) {
    const auto radix = static_cast<std::uint64_t>(codings[k].radix);
    out[k] = static_cast<int>(idx % radix);
    idx /= radix;
  }
}

Champion search_range(std::uint64_t begin, std::uint64_t end, const std::vector<NodeCoding>& codings,
                      const ChannelRealization& chan, double p_eff, const WeightVector& mu) {
  const int n = static_cast<int>(codings.size());
  std::vector<int> digits(static_cast<std::size_t>(n));
  std::vector<int> code(static_cast<std::size_t>(n));
  decode(begin, codings, digits);
  Champion champ;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    for (int k = 0; k < n; ++k) code[k] = codings[k].map[digits[k]];
    champ.consider(evaluate(code, chan, p_eff, mu), code);
    // Mixed-radix increment, least significant digit last.
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[k] < codings[k].radix) break;
      digits[k] = 0;
    }
  }
  return champ;
}

ScheduleState state_from_code(const std::vector<int>& code, const Topology& topo) {
  const std::size_t n = code.size();
  std::vector<std::uint8_t> r(n, 0), t(n, 0), f(n, 0), s(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    switch (code[k]) {
      case kR: r[k] = 1; break;
      case kT: t[k] = 1; break;
      case kF: f[k] = 1; break;
      default: s[k] = 1; break;
    }
  }
  return ScheduleState::create(std::move(r), std::move(t), std::move(f), std::move(s), topo);
}

}  // namespace

OracleResult brute_force_slot(const ChannelRealization& chan, const Topology& topo, double p_eff,
                              const WeightVector& mu, ExecMode mode, int node_cap) {
  const int n = topo.node_count();
  if (n > node_cap) {
    throw std::invalid_argument("brute_force_slot: node count exceeds the enumeration cap");
  }
  if (chan.g.size() != n) throw std::invalid_argument("channel size must match node count");
  if (mu.size() != n) throw std::invalid_argument("weight vector length mismatch");

  const std::vector<NodeCoding> codings = make_codings(topo);
  std::uint64_t total = 1;
  for (const NodeCoding& c : codings) total *= static_cast<std::uint64_t>(c.radix);

  Champion champ;
  if (mode == ExecMode::Serial) {
    champ = search_range(0, total, codings, chan, p_eff, mu);
  } else {
    std::vector<Champion> partial;
#ifdef _OPENMP
    const int max_chunks = omp_get_max_threads() * 4;
#else
    const int max_chunks = 1;
#endif
    const std::uint64_t chunk = std::max<std::uint64_t>(1024, (total + max_chunks - 1) / max_chunks);
    const int n_chunks = static_cast<int>((total + chunk - 1) / chunk);
    partial.resize(static_cast<std::size_t>(n_chunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int c = 0; c < n_chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
      const std::uint64_t end = std::min(total, begin + chunk);
      partial[c] = search_range(begin, end, codings, chan, p_eff, mu);
    }
    for (const Champion& p : partial) {
      if (!p.code.empty()) champ.consider(p.lambda, p.code);
    }
  }

  OracleResult result{state_from_code(champ.code, topo), champ.lambda, total};
  return result;
}

double GapReport::mean_ratio() const {
  double sum = 0.0;
  for (const GapRow& row : rows) sum += row.ratio;
  return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
}

double GapReport::fraction_ratio_at_least(double threshold) const {
  if (rows.empty()) return 0.0;
  int count = 0;
  for (const GapRow& row : rows) {
    if (row.ratio >= threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(rows.size());
}

double GapReport::fraction_converged() const {
  if (rows.empty()) return 0.0;
  int count = 0;
  for (const GapRow& row : rows) {
    if (row.converged) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(rows.size());
}

bool GapReport::all_dominated() const {
  for (const GapRow& row : rows) {
    if (!row.dominated) return false;
  }
  return true;
}

GapReport oracle_gap_report(int n_instances, const SimConfig& cfg, const SolverConfig& solver,
                            std::uint64_t seed, ExecMode mode) {
  if (n_instances < 1) throw std::invalid_argument("oracle_gap_report needs at least one instance");
  cfg.validate();
  solver.validate();
  const double p_eff = cfg.effective_power();

  GapReport report;
  report.rows.resize(static_cast<std::size_t>(n_instances));

  const bool parallel = mode == ExecMode::OpenMp;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n_instances; ++i) {
    const std::uint64_t instance_seed = mix_streams(mix_streams(seed, stream_tag::kOracle),
                                                    static_cast<std::uint64_t>(i));
    Rng topo_rng = Rng::substream(instance_seed, stream_tag::kTopology);
    const Topology topo = generate_topology(cfg, topo_rng);
    Rng chan_rng = make_channel_rng(instance_seed, 0);
    const ChannelRealization chan = draw_channels(topo, cfg, 0, chan_rng);
    const WeightVector mu = WeightVector::uniform(topo.node_count());

    Rng solver_rng = Rng::substream(instance_seed, stream_tag::kSolver);
    const auto alg_start = std::chrono::steady_clock::now();
    const SolveResult alg = optimize_slot(chan, topo, p_eff, mu, solver, solver_rng);
    const auto alg_end = std::chrono::steady_clock::now();
    // Nested parallelism is disabled by default; inside a parallel report the
    // oracle runs serially per instance.
    const OracleResult oracle = brute_force_slot(chan, topo, p_eff, mu,
                                                 parallel ? ExecMode::Serial : mode);
    const auto oracle_end = std::chrono::steady_clock::now();

    GapRow row;
    row.instance_seed = instance_seed;
    row.lambda_alg = alg.lambda;
    row.lambda_oracle = oracle.lambda;
    row.ratio = oracle.lambda > 0.0 ? alg.lambda / oracle.lambda : 1.0;
    row.iters_alg = alg.iters;
    row.time_alg_us =
        std::chrono::duration_cast<std::chrono::microseconds>(alg_end - alg_start).count();
    row.time_oracle_us =
        std::chrono::duration_cast<std::chrono::microseconds>(oracle_end - alg_end).count();
    row.converged = alg.converged;
    row.dominated = alg.lambda <= oracle.lambda;
    report.rows[static_cast<std::size_t>(i)] = row;
  }
  return report;
}

}  // namespace dtdd
