#include "dtdd/fpsched.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dtdd {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct AB {
  double a = 0.0;
  double b = 1.0;
};

AB received_powers(const std::vector<std::uint8_t>& t, const ChannelRealization& chan,
                   double p_eff, int x) {
  const int n = static_cast<int>(t.size());
  AB ab;
  double d_sum = 0.0;
  double i_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    if (t[v] == 0) continue;
    d_sum += chan.d.at(v, x);
    i_sum += chan.i_mat.at(v, x);
  }
  ab.a = p_eff * d_sum;
  ab.b = 1.0 + p_eff * i_sum;
  return ab;
}

// Channel copy used by the iteration: half-duplex self loops carry the sentinel
// so that transmit-while-receive is penalized out of the search, exactly as the
// data-driven transform does.
ChannelRealization masked_channel(const ChannelRealization& chan, const Topology& topo) {
  ChannelRealization out = chan;
  for (int k = 0; k < topo.node_count(); ++k) {
    if (topo.is_hd(k)) {
      out.g.at(k, k) = kHdDiagSentinel;
      out.i_mat.at(k, k) = kHdDiagSentinel;
    }
  }
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("solver epsilon must be positive");
  if (max_iters < 1) throw ConfigError("solver max_iters must be at least 1");
  if (restarts < 1) throw ConfigError("solver restarts must be at least 1");
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j, const SolverConfig& defaults) {
  if (!j.is_object()) throw ConfigError("solver block must be a json object");
  static const std::set<std::string> known = {"epsilon", "max_iters", "restarts", "update_rule"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown solver key: '" + key + "'");
  }
  SolverConfig cfg = defaults;
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
  if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
  if (j.contains("update_rule")) {
    const std::string rule = j.at("update_rule").get<std::string>();
    if (rule == "jacobi") {
      cfg.update_rule = UpdateRule::Jacobi;
    } else if (rule == "gauss-seidel") {
      cfg.update_rule = UpdateRule::GaussSeidel;
    } else {
      throw ConfigError("update_rule must be \"jacobi\" or \"gauss-seidel\"");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json SolverConfig::to_json() const {
  return {{"epsilon", epsilon},
          {"max_iters", max_iters},
          {"restarts", restarts},
          {"update_rule", update_rule == UpdateRule::Jacobi ? "jacobi" : "gauss-seidel"}};
}

std::vector<double> fp_update_w(const std::vector<std::uint8_t>& t, const ChannelRealization& chan,
                                double p_eff) {
  const int n = static_cast<int>(t.size());
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const AB ab = received_powers(t, chan, p_eff, x);
    w[x] = ab.a < kActivityTolerance ? 0.0 : (ab.a + ab.b) / std::sqrt(ab.a);
  }
  return w;
}

std::vector<double> fp_update_l(const std::vector<std::uint8_t>& t, const std::vector<double>& w,
                                const ChannelRealization& chan, double p_eff) {
  const int n = static_cast<int>(t.size());
  if (w.size() != t.size()) throw std::invalid_argument("w vector length mismatch");
  std::vector<double> l(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const AB ab = received_powers(t, chan, p_eff, x);
    // With the w_x = 0 sentinel this reduces to 1 / (A_x + B_x).
    const double gap = std::sqrt(ab.a) - w[x];
    l[x] = 1.0 / (gap * gap + ab.b);
  }
  return l;
}

std::vector<std::uint8_t> fp_update_t(const FpIterate& prev, const ChannelRealization& chan,
                                      double p_eff, const WeightVector& mu, UpdateRule rule) {
  const int n = static_cast<int>(prev.t_vec.size());
  if (prev.w_vec.size() != prev.t_vec.size() || prev.l_vec.size() != prev.t_vec.size()) {
    throw std::invalid_argument("iterate vectors have mismatched lengths");
  }
  if (mu.size() != n) throw std::invalid_argument("weight vector length mismatch");

  std::vector<std::uint8_t> t_next = prev.t_vec;
  // Synchronous rule: every node is judged against the previous iterate.
  // Sequential rule: each accepted flip immediately refreshes the transmit
  // vector and the scaling vectors, so later nodes see the updated network.
  const std::vector<std::uint8_t>* t_read = &prev.t_vec;
  std::vector<double> w_cur = prev.w_vec;
  std::vector<double> l_cur = prev.l_vec;
  if (rule == UpdateRule::GaussSeidel) t_read = &t_next;

  // Desired received power at each node k under the read vector. This is the
  // A_k the ratio below divides by: the marginal-value test for t_x compares
  // w_k against the signal level receiver k currently enjoys.
  std::vector<double> a_tot(static_cast<std::size_t>(n), 0.0);
  auto recompute_totals = [&]() {
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int v = 0; v < n; ++v) {
        if ((*t_read)[v] != 0) sum += chan.d.at(v, k);
      }
      a_tot[k] = p_eff * sum;
    }
  };
  auto refresh_scalings = [&]() {
    w_cur = fp_update_w(t_next, chan, p_eff);
    l_cur = fp_update_l(t_next, w_cur, chan, p_eff);
  };
  recompute_totals();

  for (int x = 0; x < n; ++x) {
    double s_x = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d_xk = chan.d.at(x, k);
      const double i_xk = chan.i_mat.at(x, k);
      // Receiver k hears no active desired transmitter at all (w sentinel).
      // The exact per-receiver term l_k·[d(1 − w_k/√A_k) + i] has a finite
      // limit as A_k → 0: the interference part vanishes together with
      // l_k → A_k/(B_k(A_k+B_k)) → 0, while the product of l_k with the
      // desired part tends to −d_{x,k}/B_k — the marginal value of lighting
      // the link up. With the sentinel l_k = 1/B_k that limit is reproduced
      // exactly by subtracting the plain desired term, so an idle link
      // activates precisely when the rate it would create outweighs the
      // interference it causes elsewhere.
      if (w_cur[k] == 0.0) {
        if (d_xk > 0.0) {
          s_x -= (p_eff * mu[k] * l_cur[k] / kLn2) * d_xk;
        }
        continue;
      }
      double bracket = i_xk;
      if (d_xk > 0.0) {
        const double root = std::sqrt(a_tot[k]);
        // With w_k > 0 the tolerance alignment guarantees a non-degenerate
        // root; the guard keeps the exact-limit behavior (ratio -> +inf,
        // term strongly negative) should the two ever disagree.
        const double ratio = root < kDivisionTolerance ? kLargeRatio : w_cur[k] / root;
        bracket += d_xk * (1.0 - ratio);
      }
      s_x += (p_eff * mu[k] * l_cur[k] / kLn2) * bracket;
    }
    const std::uint8_t decision = s_x >= 0.0 ? 0 : 1;
    if (rule == UpdateRule::GaussSeidel && decision != t_next[x]) {
      t_next[x] = decision;
      recompute_totals();
      refresh_scalings();
    } else {
      t_next[x] = decision;
    }
  }
  return t_next;
}

double transmit_objective(const std::vector<std::uint8_t>& t, const ChannelRealization& chan,
                          double p_eff, const WeightVector& mu) {
  const int n = static_cast<int>(t.size());
  double lambda = 0.0;
  for (int k = 0; k < n; ++k) {
    const AB ab = received_powers(t, chan, p_eff, k);
    lambda += mu[k] * std::log2(1.0 + ab.a / ab.b);
  }
  return lambda;
}

ScheduleState postprocess_states(const std::vector<std::uint8_t>& t, const Topology& topo) {
  const int n = topo.node_count();
  if (static_cast<int>(t.size()) != n) {
    throw std::invalid_argument("transmit vector length must match node count");
  }
  std::vector<std::uint8_t> r(t.size(), 0), t_out(t.size(), 0), f(t.size(), 0), s(t.size(), 0);
  for (int x = 0; x < n; ++x) {
    bool partner_active = false;
    for (int j : topo.partners_of(x)) {
      if (t[j] != 0) {
        partner_active = true;
        break;
      }
    }
    if (t[x] == 0) {
      (partner_active ? r[x] : s[x]) = 1;
    } else if (partner_active && !topo.is_hd(x)) {
      f[x] = 1;
    } else {
      t_out[x] = 1;
    }
  }
  return ScheduleState::create(std::move(r), std::move(t_out), std::move(f), std::move(s), topo);
}

ChannelRealization hd_diag_transform(const ChannelRealization& chan) {
  ChannelRealization out = chan;
  const int n = out.g.size();
  for (int k = 0; k < n; ++k) {
    out.g.at(k, k) = kHdDiagSentinel;
    // The self loop is never a desired link, so the sentinel lands in the
    // interference part.
    out.i_mat.at(k, k) = kHdDiagSentinel;
  }
  return out;
}

SolveResult optimize_slot(const ChannelRealization& chan, const Topology& topo, double p_eff,
                          const WeightVector& mu, const SolverConfig& solver, Rng& rng) {
  solver.validate();
  const int n = topo.node_count();
  if (chan.g.size() != n) throw std::invalid_argument("channel size must match node count");
  if (mu.size() != n) throw std::invalid_argument("weight vector length mismatch");

  const ChannelRealization work = masked_channel(chan, topo);

  std::vector<std::uint8_t> best_t(static_cast<std::size_t>(n), 0);
  double best_lambda = -std::numeric_limits<double>::infinity();
  std::vector<double> best_trajectory;
  int best_iters = 0;
  bool best_converged = false;

  for (int restart = 0; restart < solver.restarts; ++restart) {
    FpIterate it;
    it.n = 0;
    it.t_vec.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) it.t_vec[k] = rng.bernoulli_half() ? 1 : 0;
    it.w_vec = fp_update_w(it.t_vec, work, p_eff);
    it.l_vec = fp_update_l(it.t_vec, it.w_vec, work, p_eff);
    it.lambda_n = transmit_objective(it.t_vec, work, p_eff, mu);

    std::vector<double> trajectory;
    std::vector<std::uint8_t> restart_best_t = it.t_vec;
    double restart_best_lambda = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iters = 0;

    for (int step = 1; step <= solver.max_iters; ++step) {
      const double lambda_prev = it.lambda_n;
      it.t_vec = fp_update_t(it, work, p_eff, mu, solver.update_rule);
      it.w_vec = fp_update_w(it.t_vec, work, p_eff);
      it.l_vec = fp_update_l(it.t_vec, it.w_vec, work, p_eff);
      it.lambda_n = transmit_objective(it.t_vec, work, p_eff, mu);
      it.n = step;
      iters = step;
      trajectory.push_back(it.lambda_n);
      if (it.lambda_n > restart_best_lambda) {
        restart_best_lambda = it.lambda_n;
        restart_best_t = it.t_vec;
      }
      if (std::abs(it.lambda_n - lambda_prev) < solver.epsilon) {
        converged = true;
        break;
      }
    }

    // All reported diagnostics (iteration count, convergence flag, objective
    // trajectory) describe the restart that produced the returned schedule.
    if (restart_best_lambda > best_lambda) {
      best_lambda = restart_best_lambda;
      best_t = restart_best_t;
      best_trajectory = std::move(trajectory);
      best_iters = iters;
      best_converged = converged;
    }
  }

  SolveResult result{ScheduleState::all_silent(topo), 0.0, 0, false, {}};
  result.state = postprocess_states(best_t, topo);
  // Post-processing may only relabel: the set of radiating nodes must be exactly
  // the chosen transmit vector.
  for (int k = 0; k < n; ++k) {
    if ((result.state.transmitting(k) ? 1 : 0) != best_t[k]) {
      throw std::logic_error("post-processing changed the radiating set");
    }
  }
  const RateRecord rec = weighted_sum_rate(result.state, chan, p_eff, mu);
  result.lambda = rec.lambda;
  result.iters = best_iters;
  result.converged = best_converged;
  result.trajectory = std::move(best_trajectory);
  return result;
}

}  // namespace dtdd
