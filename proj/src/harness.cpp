#include "dtdd/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace dtdd {

namespace {

constexpr std::uint64_t kCalibrationTag = 0xca11b7a7e5ull;
constexpr std::uint64_t kFairnessTag = 0xfa12e55001ull;

std::uint64_t rep_seed(std::uint64_t seed, int rep) {
  return mix_streams(mix_streams(seed, stream_tag::kRepetition), static_cast<std::uint64_t>(rep));
}

WeightVector make_weights(WeightRule rule, int n) {
  return rule == WeightRule::Uniform ? WeightVector::uniform(n) : WeightVector::inverse_index(n);
}

// Self-interference levels that actually matter for a scheme: schemes with
// full-duplex nodes are crossed with the configured si list, half-duplex-only
// schemes keep the base value.
std::vector<double> scheme_si_values(Scheme scheme, const FullConfig& cfg) {
  const bool fd_involved =
      scheme == Scheme::ProposedFd || scheme == Scheme::ProposedMixed || scheme == Scheme::Bs3;
  if (!fd_involved) return {cfg.sim.si_suppression_db};
  if (cfg.exp.si_db.empty()) return {cfg.sim.si_suppression_db};
  return cfg.exp.si_db;
}

double sum_rate_of_records(const std::vector<SlotOutcome>& outcomes) {
  std::vector<RateRecord> records;
  records.reserve(outcomes.size());
  for (const SlotOutcome& o : outcomes) records.push_back(o.record);
  const std::vector<double> avg = average_rates(records);
  double sum = 0.0;
  for (double v : avg) sum += v;
  return sum;
}

std::vector<double> node_averages(const std::vector<SlotOutcome>& outcomes) {
  std::vector<RateRecord> records;
  records.reserve(outcomes.size());
  for (const SlotOutcome& o : outcomes) records.push_back(o.record);
  return average_rates(records);
}

void finish_cell_aggregate(std::vector<double>& values, const std::vector<std::string>& errors,
                           double& mean, double& stderr_mean, long& n_ok) {
  mean = 0.0;
  stderr_mean = 0.0;
  n_ok = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (errors[i].empty()) {
      mean += values[i];
      ++n_ok;
    }
  }
  if (n_ok == 0) return;
  mean /= static_cast<double>(n_ok);
  if (n_ok < 2) return;
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (errors[i].empty()) {
      const double d = values[i] - mean;
      ss += d * d;
    }
  }
  stderr_mean = std::sqrt(ss / static_cast<double>(n_ok - 1)) /
                std::sqrt(static_cast<double>(n_ok));
}

std::vector<Scheme> resolve_schemes(const FullConfig& cfg, std::vector<Scheme> defaults) {
  if (cfg.exp.schemes.empty()) return defaults;
  std::vector<Scheme> out;
  for (const std::string& name : cfg.exp.schemes) out.push_back(scheme_from_name(name));
  return out;
}

std::vector<CellResult> run_sweep(const FullConfig& cfg, ExecMode mode,
                                  const std::vector<double>& grid,
                                  const std::vector<Scheme>& schemes,
                                  void (*apply_x)(SimConfig&, double)) {
  std::vector<CellResult> cells;
  for (double x : grid) {
    for (Scheme scheme : schemes) {
      for (double si : scheme_si_values(scheme, cfg)) {
        CellResult cell;
        cell.x_value = x;
        cell.scheme = scheme;
        cell.si_db = si;
        cell.rep_sum_rate.assign(static_cast<std::size_t>(cfg.exp.repetitions), 0.0);
        cell.rep_error.assign(static_cast<std::size_t>(cfg.exp.repetitions), "");
        SimConfig sim_x = cfg.sim;
        apply_x(sim_x, x);
        sim_x.si_suppression_db = si;
        for (int rep = 0; rep < cfg.exp.repetitions; ++rep) {
          try {
            const std::uint64_t rs = rep_seed(sim_x.seed, rep);
            const Topology topo = scheme_topology(sim_x, scheme, rep);
            const WeightVector mu = make_weights(cfg.exp.weights, topo.node_count());
            const auto outcomes = run_schedule_slots(topo, sim_x, cfg.solver, mu,
                                                     scheme_scheduler(scheme), 1, sim_x.n_slots,
                                                     rs, mode);
            cell.rep_sum_rate[static_cast<std::size_t>(rep)] = sum_rate_of_records(outcomes);
          } catch (const std::exception& e) {
            cell.rep_error[static_cast<std::size_t>(rep)] = e.what();
          }
        }
        finish_cell_aggregate(cell.rep_sum_rate, cell.rep_error, cell.mean_sum_rate,
                              cell.stderr_mean, cell.n_ok);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

}  // namespace

Scheme scheme_from_name(const std::string& name) {
  if (name == "proposed_fd") return Scheme::ProposedFd;
  if (name == "proposed_hd") return Scheme::ProposedHd;
  if (name == "proposed_mixed") return Scheme::ProposedMixed;
  if (name == "bs1") return Scheme::Bs1;
  if (name == "bs3") return Scheme::Bs3;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::ProposedFd: return "proposed_fd";
    case Scheme::ProposedHd: return "proposed_hd";
    case Scheme::ProposedMixed: return "proposed_mixed";
    case Scheme::Bs1: return "bs1";
    case Scheme::Bs3: return "bs3";
  }
  throw std::logic_error("unreachable scheme");
}

Topology apply_scheme_duplex(const Topology& topo, Scheme scheme) {
  switch (scheme) {
    case Scheme::ProposedFd:
    case Scheme::Bs3:
      return topo.with_uniform_duplex(Duplex::FullDuplex);
    case Scheme::ProposedHd:
    case Scheme::Bs1:
      return topo.with_uniform_duplex(Duplex::HalfDuplex);
    case Scheme::ProposedMixed: {
      std::vector<Duplex> flags(static_cast<std::size_t>(topo.node_count()));
      for (int k = 0; k < topo.node_count(); ++k) {
        flags[static_cast<std::size_t>(k)] =
            (k / 2) % 2 == 0 ? Duplex::FullDuplex : Duplex::HalfDuplex;
      }
      return topo.with_duplex(flags);
    }
  }
  throw std::logic_error("unreachable scheme");
}

SlotScheduler scheme_scheduler(Scheme scheme) {
  switch (scheme) {
    case Scheme::Bs1: return SlotScheduler::Bs1;
    case Scheme::Bs3: return SlotScheduler::Bs3;
    default: return SlotScheduler::Proposed;
  }
}

Topology scheme_topology(const SimConfig& sim, Scheme scheme, int rep) {
  Rng topo_rng = Rng::substream(rep_seed(sim.seed, rep), stream_tag::kTopology);
  return apply_scheme_duplex(generate_topology(sim, topo_rng), scheme);
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (power_dbm_grid.empty()) throw ConfigError("power_dbm_grid must be non-empty");
  if (dim_m_grid.empty()) throw ConfigError("dim_m_grid must be non-empty");
  for (double v : dim_m_grid) {
    if (!(v > 0.0)) throw ConfigError("dim_m_grid entries must be positive");
  }
  if (mu1_points < 2) throw ConfigError("mu1_points must be at least 2");
  for (const std::string& s : schemes) scheme_from_name(s);
  for (double v : si_db) {
    if (!(v >= 0.0)) throw ConfigError("si_db entries must be >= 0");
  }
  if (oracle_instances < 1) throw ConfigError("oracle_instances must be at least 1");
  if (oracle_n_pairs < 1 || oracle_n_pairs > 6) {
    throw ConfigError("oracle_n_pairs must be in [1, 6]");
  }
  if (complexity_nodes.empty()) throw ConfigError("complexity_nodes must be non-empty");
  for (int n : complexity_nodes) {
    if (n < 2 || n % 2 != 0 || n > 12) {
      throw ConfigError("complexity_nodes entries must be even and in [2, 12]");
    }
  }
  if (complexity_slots < 1) throw ConfigError("complexity_slots must be at least 1");
  if (fairness.calibration_slots < 1 || fairness.loop_slots < 1) {
    throw ConfigError("fairness slot counts must be at least 1");
  }
  if (!(fairness.demand_fraction > 0.0)) {
    throw ConfigError("fairness demand_fraction must be positive");
  }
  if (!(fairness.alpha >= 0.0)) throw ConfigError("fairness alpha must be >= 0");
  scheme_from_name(fairness.scheme);
  FairnessConfig fc;
  fc.step_c = fairness.step_c;
  fc.step_d = fairness.step_d;
  fc.update_sign = fairness.update_sign;
  fc.validate();
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j,
                                             const ExperimentConfig& defaults) {
  if (!j.is_object()) throw ConfigError("experiment block must be a json object");
  static const std::set<std::string> known = {
      "repetitions", "power_dbm_grid", "dim_m_grid",      "mu1_points",
      "schemes",     "si_db",          "weights",         "oracle_instances",
      "oracle_n_pairs", "complexity_nodes", "complexity_slots", "fairness"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown experiment key: '" + key + "'");
  }
  ExperimentConfig cfg = defaults;
  if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
  if (j.contains("power_dbm_grid")) {
    cfg.power_dbm_grid = j.at("power_dbm_grid").get<std::vector<double>>();
  }
  if (j.contains("dim_m_grid")) cfg.dim_m_grid = j.at("dim_m_grid").get<std::vector<double>>();
  if (j.contains("mu1_points")) cfg.mu1_points = j.at("mu1_points").get<int>();
  if (j.contains("schemes")) cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
  if (j.contains("si_db")) cfg.si_db = j.at("si_db").get<std::vector<double>>();
  if (j.contains("weights")) {
    const std::string w = j.at("weights").get<std::string>();
    if (w == "uniform") {
      cfg.weights = WeightRule::Uniform;
    } else if (w == "inverse_index") {
      cfg.weights = WeightRule::InverseIndex;
    } else {
      throw ConfigError("weights must be \"uniform\" or \"inverse_index\"");
    }
  }
  if (j.contains("oracle_instances")) cfg.oracle_instances = j.at("oracle_instances").get<int>();
  if (j.contains("oracle_n_pairs")) cfg.oracle_n_pairs = j.at("oracle_n_pairs").get<int>();
  if (j.contains("complexity_nodes")) {
    cfg.complexity_nodes = j.at("complexity_nodes").get<std::vector<int>>();
  }
  if (j.contains("complexity_slots")) cfg.complexity_slots = j.at("complexity_slots").get<int>();
  if (j.contains("fairness")) {
    const nlohmann::json& jf = j.at("fairness");
    if (!jf.is_object()) throw ConfigError("fairness block must be a json object");
    static const std::set<std::string> fair_known = {
        "calibration_slots", "loop_slots", "demand_fraction", "alpha",
        "scheme",            "step_c",     "step_d",          "update_sign"};
    for (const auto& [key, value] : jf.items()) {
      (void)value;
      if (!fair_known.count(key)) throw ConfigError("unknown fairness key: '" + key + "'");
    }
    if (jf.contains("calibration_slots")) {
      cfg.fairness.calibration_slots = jf.at("calibration_slots").get<long>();
    }
    if (jf.contains("loop_slots")) cfg.fairness.loop_slots = jf.at("loop_slots").get<long>();
    if (jf.contains("demand_fraction")) {
      cfg.fairness.demand_fraction = jf.at("demand_fraction").get<double>();
    }
    if (jf.contains("alpha")) cfg.fairness.alpha = jf.at("alpha").get<double>();
    if (jf.contains("scheme")) cfg.fairness.scheme = jf.at("scheme").get<std::string>();
    if (jf.contains("step_c")) cfg.fairness.step_c = jf.at("step_c").get<double>();
    if (jf.contains("step_d")) cfg.fairness.step_d = jf.at("step_d").get<double>();
    if (jf.contains("update_sign")) cfg.fairness.update_sign = jf.at("update_sign").get<double>();
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"repetitions", repetitions},
          {"power_dbm_grid", power_dbm_grid},
          {"dim_m_grid", dim_m_grid},
          {"mu1_points", mu1_points},
          {"schemes", schemes},
          {"si_db", si_db},
          {"weights", weights == WeightRule::Uniform ? "uniform" : "inverse_index"},
          {"oracle_instances", oracle_instances},
          {"oracle_n_pairs", oracle_n_pairs},
          {"complexity_nodes", complexity_nodes},
          {"complexity_slots", complexity_slots},
          {"fairness",
           {{"calibration_slots", fairness.calibration_slots},
            {"loop_slots", fairness.loop_slots},
            {"demand_fraction", fairness.demand_fraction},
            {"alpha", fairness.alpha},
            {"scheme", fairness.scheme},
            {"step_c", fairness.step_c},
            {"step_d", fairness.step_d},
            {"update_sign", fairness.update_sign}}}};
}

FullConfig FullConfig::from_json(const nlohmann::json& j) {
  FullConfig cfg;
  cfg.sim = SimConfig::from_json(j);
  SolverConfig solver_defaults;
  solver_defaults.epsilon = cfg.sim.epsilon;
  solver_defaults.max_iters = cfg.sim.max_iters;
  cfg.solver = solver_defaults;
  if (j.contains("solver")) cfg.solver = SolverConfig::from_json(j.at("solver"), solver_defaults);
  if (j.contains("experiment")) {
    cfg.exp = ExperimentConfig::from_json(j.at("experiment"), ExperimentConfig{});
  }
  cfg.exp.validate();
  return cfg;
}

FullConfig FullConfig::load(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json parse error: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json FullConfig::to_json() const {
  nlohmann::json j = sim.to_json();
  j["solver"] = solver.to_json();
  j["experiment"] = exp.to_json();
  return j;
}

std::vector<CellResult> run_power_sweep(const FullConfig& cfg, ExecMode mode) {
  cfg.sim.validate();
  cfg.exp.validate();
  const auto schemes = resolve_schemes(
      cfg, {Scheme::ProposedFd, Scheme::ProposedHd, Scheme::Bs1, Scheme::Bs3});
  return run_sweep(cfg, mode, cfg.exp.power_dbm_grid, schemes,
                   [](SimConfig& sim, double x) { sim.tx_power_dbm = x; });
}

std::vector<CellResult> run_dim_sweep(const FullConfig& cfg, ExecMode mode) {
  cfg.sim.validate();
  cfg.exp.validate();
  const auto schemes = resolve_schemes(cfg, {Scheme::ProposedHd, Scheme::Bs1});
  return run_sweep(cfg, mode, cfg.exp.dim_m_grid, schemes,
                   [](SimConfig& sim, double x) { sim.area_side_m = x; });
}

std::vector<RegionCell> run_rate_region(const FullConfig& cfg, ExecMode mode) {
  cfg.sim.validate();
  cfg.exp.validate();
  const auto schemes = resolve_schemes(
      cfg, {Scheme::ProposedHd, Scheme::Bs1, Scheme::ProposedFd, Scheme::Bs3});
  std::vector<RegionCell> cells;
  for (int p = 0; p < cfg.exp.mu1_points; ++p) {
    const double mu1 = static_cast<double>(p) / static_cast<double>(cfg.exp.mu1_points - 1);
    for (Scheme scheme : schemes) {
      RegionCell cell;
      cell.mu1 = mu1;
      cell.scheme = scheme;
      cell.rep_group1.assign(static_cast<std::size_t>(cfg.exp.repetitions), 0.0);
      cell.rep_group2.assign(static_cast<std::size_t>(cfg.exp.repetitions), 0.0);
      cell.rep_error.assign(static_cast<std::size_t>(cfg.exp.repetitions), "");
      for (int rep = 0; rep < cfg.exp.repetitions; ++rep) {
        try {
          const std::uint64_t rs = rep_seed(cfg.sim.seed, rep);
          const Topology topo = scheme_topology(cfg.sim, scheme, rep);
          const int n = topo.node_count();
          std::vector<double> w(static_cast<std::size_t>(n));
          const double n_half = static_cast<double>(n) / 2.0;
          for (int k = 0; k < n; ++k) {
            w[static_cast<std::size_t>(k)] = (k % 2 == 0 ? mu1 : 1.0 - mu1) / n_half;
          }
          const WeightVector mu(std::move(w));
          const auto outcomes = run_schedule_slots(topo, cfg.sim, cfg.solver, mu,
                                                   scheme_scheduler(scheme), 1, cfg.sim.n_slots,
                                                   rs, mode);
          const std::vector<double> avg = node_averages(outcomes);
          double g1 = 0.0, g2 = 0.0;
          for (int k = 0; k < n; ++k) (k % 2 == 0 ? g1 : g2) += avg[static_cast<std::size_t>(k)];
          cell.rep_group1[static_cast<std::size_t>(rep)] = g1;
          cell.rep_group2[static_cast<std::size_t>(rep)] = g2;
        } catch (const std::exception& e) {
          cell.rep_error[static_cast<std::size_t>(rep)] = e.what();
        }
      }
      double unused_stderr = 0.0;
      finish_cell_aggregate(cell.rep_group1, cell.rep_error, cell.rate_group1, unused_stderr,
                            cell.n_ok);
      long unused_n = 0;
      finish_cell_aggregate(cell.rep_group2, cell.rep_error, cell.rate_group2, unused_stderr,
                            unused_n);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<ComplexityRow> run_complexity(const FullConfig& cfg, ExecMode mode) {
  cfg.sim.validate();
  cfg.exp.validate();
  using clock = std::chrono::steady_clock;
  std::vector<ComplexityRow> rows;
  const int drops = std::min(2, cfg.exp.repetitions);
  for (int n_nodes : cfg.exp.complexity_nodes) {
    SimConfig sim_n = cfg.sim;
    sim_n.n_pairs = n_nodes / 2;
    double opt_total_us = 0.0;
    long opt_samples = 0;
    double brute_total_us = 0.0;
    long brute_samples = 0;
    for (int drop = 0; drop < drops; ++drop) {
      const std::uint64_t rs = rep_seed(cfg.sim.seed, drop);
      Rng topo_rng = Rng::substream(rs, stream_tag::kTopology);
      const Topology topo = generate_topology(sim_n, topo_rng);
      const WeightVector mu = make_weights(cfg.exp.weights, topo.node_count());
      const double p_eff = sim_n.effective_power();

      const auto opt_start = clock::now();
      for (long slot = 1; slot <= cfg.exp.complexity_slots; ++slot) {
        Rng chan_rng = make_channel_rng(rs, slot);
        const ChannelRealization chan = draw_channels(topo, sim_n, slot, chan_rng);
        Rng solver_rng = Rng::substream(mix_streams(rs, stream_tag::kSolver),
                                        static_cast<std::uint64_t>(slot));
        (void)optimize_slot(chan, topo, p_eff, mu, cfg.solver, solver_rng);
      }
      const auto opt_end = clock::now();
      opt_total_us +=
          std::chrono::duration<double, std::micro>(opt_end - opt_start).count();
      opt_samples += cfg.exp.complexity_slots;

      Rng chan_rng = make_channel_rng(rs, 1);
      const ChannelRealization chan = draw_channels(topo, sim_n, 1, chan_rng);
      const auto brute_start = clock::now();
      (void)brute_force_slot(chan, topo, p_eff, mu, mode);
      const auto brute_end = clock::now();
      brute_total_us +=
          std::chrono::duration<double, std::micro>(brute_end - brute_start).count();
      brute_samples += 1;
    }
    rows.push_back({n_nodes, "optimize_slot", opt_total_us / static_cast<double>(opt_samples),
                    opt_samples});
    rows.push_back({n_nodes, "brute_force", brute_total_us / static_cast<double>(brute_samples),
                    brute_samples});
  }
  return rows;
}

FairnessOutcome run_fairness_experiment(const FullConfig& cfg, ExecMode mode) {
  cfg.sim.validate();
  cfg.exp.validate();
  const Scheme scheme = scheme_from_name(cfg.exp.fairness.scheme);
  if (scheme_scheduler(scheme) != SlotScheduler::Proposed) {
    throw ConfigError("fairness experiment requires a proposed_* scheme");
  }
  const std::uint64_t rs = rep_seed(cfg.sim.seed, 0);
  const Topology topo = scheme_topology(cfg.sim, scheme, 0);
  const int n = topo.node_count();

  const auto calib = run_schedule_slots(topo, cfg.sim, cfg.solver, WeightVector::uniform(n),
                                        SlotScheduler::Proposed, 1,
                                        cfg.exp.fairness.calibration_slots,
                                        mix_streams(rs, kCalibrationTag), mode);
  FairnessOutcome out;
  out.unconstrained_rate = node_averages(calib);
  out.tau.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.tau[static_cast<std::size_t>(k)] =
        cfg.exp.fairness.demand_fraction * out.unconstrained_rate[static_cast<std::size_t>(k)];
  }

  FairnessConfig fair;
  fair.step_c = cfg.exp.fairness.step_c;
  fair.step_d = cfg.exp.fairness.step_d;
  fair.update_sign = cfg.exp.fairness.update_sign;
  out.trace = run_fairness_loop(topo, cfg.sim, cfg.solver, fair, out.tau,
                                std::vector<double>(static_cast<std::size_t>(n),
                                                    cfg.exp.fairness.alpha),
                                cfg.exp.fairness.loop_slots, mix_streams(rs, kFairnessTag));

  out.final_r_bar_e.assign(static_cast<std::size_t>(n), 0.0);
  out.final_mu.assign(static_cast<std::size_t>(n), 0.0);
  for (auto it = out.trace.end() - n; it != out.trace.end(); ++it) {
    out.final_r_bar_e[static_cast<std::size_t>(it->node)] = it->r_bar_e;
    out.final_mu[static_cast<std::size_t>(it->node)] = it->mu;
  }
  return out;
}

SingleRunOutcome run_single(const FullConfig& cfg, Scheme scheme, ExecMode mode) {
  cfg.sim.validate();
  const std::uint64_t rs = rep_seed(cfg.sim.seed, 0);
  const Topology topo = scheme_topology(cfg.sim, scheme, 0);
  const WeightVector mu = make_weights(cfg.exp.weights, topo.node_count());
  auto outcomes = run_schedule_slots(topo, cfg.sim, cfg.solver, mu, scheme_scheduler(scheme), 1,
                                     cfg.sim.n_slots, rs, mode);
  return SingleRunOutcome{scheme, std::move(outcomes), mu};
}

}  // namespace dtdd
