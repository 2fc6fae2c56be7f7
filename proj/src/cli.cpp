#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtdd/csv.hpp"
#include "dtdd/harness.hpp"

namespace dtdd {

namespace {

std::string scheme_cell(Scheme scheme) { return scheme_name(scheme); }

}  // namespace

void write_sweep_csv(const std::filesystem::path& path, const std::vector<CellResult>& cells) {
  CsvWriter csv({"x_value", "scheme", "si_db", "mean_sum_rate", "stderr", "n_reps"});
  for (const CellResult& c : cells) {
    csv.add_row({CsvWriter::num(c.x_value), scheme_cell(c.scheme), CsvWriter::num(c.si_db),
                 c.n_ok > 0 ? CsvWriter::num(c.mean_sum_rate) : "",
                 c.n_ok > 0 ? CsvWriter::num(c.stderr_mean) : "", CsvWriter::num(c.n_ok)});
  }
  csv.write(path);
}

void write_sweep_raw_csv(const std::filesystem::path& path, const std::vector<CellResult>& cells) {
  CsvWriter csv({"x_value", "scheme", "si_db", "rep", "sum_rate", "status"});
  for (const CellResult& c : cells) {
    for (std::size_t rep = 0; rep < c.rep_sum_rate.size(); ++rep) {
      const bool ok = c.rep_error[rep].empty();
      csv.add_row({CsvWriter::num(c.x_value), scheme_cell(c.scheme), CsvWriter::num(c.si_db),
                   CsvWriter::num(static_cast<long long>(rep)),
                   ok ? CsvWriter::num(c.rep_sum_rate[rep]) : "",
                   ok ? std::string("ok") : c.rep_error[rep]});
    }
  }
  csv.write(path);
}

void write_region_csv(const std::filesystem::path& path, const std::vector<RegionCell>& cells) {
  CsvWriter csv({"mu1", "scheme", "rate_group1", "rate_group2"});
  for (const RegionCell& c : cells) {
    csv.add_row({CsvWriter::num(c.mu1), scheme_cell(c.scheme),
                 c.n_ok > 0 ? CsvWriter::num(c.rate_group1) : "",
                 c.n_ok > 0 ? CsvWriter::num(c.rate_group2) : ""});
  }
  csv.write(path);
}

void write_region_raw_csv(const std::filesystem::path& path,
                          const std::vector<RegionCell>& cells) {
  CsvWriter csv({"mu1", "scheme", "rep", "rate_group1", "rate_group2", "status"});
  for (const RegionCell& c : cells) {
    for (std::size_t rep = 0; rep < c.rep_group1.size(); ++rep) {
      const bool ok = c.rep_error[rep].empty();
      csv.add_row({CsvWriter::num(c.mu1), scheme_cell(c.scheme),
                   CsvWriter::num(static_cast<long long>(rep)),
                   ok ? CsvWriter::num(c.rep_group1[rep]) : "",
                   ok ? CsvWriter::num(c.rep_group2[rep]) : "",
                   ok ? std::string("ok") : c.rep_error[rep]});
    }
  }
  csv.write(path);
}

void write_gap_csv(const std::filesystem::path& path, const GapReport& report) {
  CsvWriter csv({"instance_seed", "lambda_alg", "lambda_oracle", "ratio", "iters_alg",
                 "time_alg_us", "time_oracle_us"});
  for (const GapRow& r : report.rows) {
    csv.add_row({CsvWriter::num(static_cast<unsigned long long>(r.instance_seed)),
                 CsvWriter::num(r.lambda_alg),
                 CsvWriter::num(r.lambda_oracle), CsvWriter::num(r.ratio),
                 CsvWriter::num(r.iters_alg), CsvWriter::num(r.time_alg_us),
                 CsvWriter::num(r.time_oracle_us)});
  }
  csv.write(path);
}

void write_complexity_csv(const std::filesystem::path& path,
                          const std::vector<ComplexityRow>& rows) {
  CsvWriter csv({"n_nodes", "method", "mean_time_us", "n_samples"});
  for (const ComplexityRow& r : rows) {
    csv.add_row({CsvWriter::num(r.n_nodes), r.method, CsvWriter::num(r.mean_time_us),
                 CsvWriter::num(r.n_samples)});
  }
  csv.write(path);
}

void write_fairness_csv(const std::filesystem::path& path,
                        const std::vector<FairnessTraceRow>& trace) {
  CsvWriter csv({"slot", "node", "mu", "r_bar_e", "tau", "achieved_rate"});
  for (const FairnessTraceRow& r : trace) {
    csv.add_row({CsvWriter::num(r.slot), CsvWriter::num(r.node), CsvWriter::num(r.mu),
                 CsvWriter::num(r.r_bar_e), CsvWriter::num(r.tau),
                 CsvWriter::num(r.achieved_rate)});
  }
  csv.write(path);
}

void write_rates_csv(const std::filesystem::path& path, const std::vector<SlotOutcome>& slots) {
  CsvWriter csv({"slot", "node", "rate", "lambda"});
  for (const SlotOutcome& o : slots) {
    for (std::size_t k = 0; k < o.record.per_node_rate.size(); ++k) {
      csv.add_row({CsvWriter::num(o.record.slot), CsvWriter::num(static_cast<long long>(k)),
                   CsvWriter::num(o.record.per_node_rate[k]), CsvWriter::num(o.record.lambda)});
    }
  }
  csv.write(path);
}

void write_manifest(const std::filesystem::path& path, const FullConfig& cfg,
                    const std::string& command) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = cfg.sim.seed;
  j["config"] = cfg.to_json();
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path.string());
  file << j.dump(2) << "\n";
}

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::vector<std::string> schemes;
  std::vector<double> si_db;
  bool quiet = false;
  bool serial = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file (defaults used when omitted)");
  cmd->add_option("--seed", opt.seed, "override the base seed");
  cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--scheme", opt.schemes,
                  "scheme selection (proposed_fd, proposed_hd, proposed_mixed, bs1, bs3); "
                  "repeatable");
  cmd->add_option("--si-db", opt.si_db, "self-interference suppression values in dB; repeatable");
  cmd->add_flag("--quiet", opt.quiet, "suppress progress output");
  cmd->add_flag("--serial", opt.serial, "run single-threaded instead of OpenMP");
}

FullConfig load_with_overrides(const CliOptions& opt) {
  FullConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = FullConfig::load(opt.config_path);
  } else {
    cfg.sim.validate();
    cfg.exp.validate();
  }
  if (opt.seed) cfg.sim.seed = *opt.seed;
  if (!opt.schemes.empty()) cfg.exp.schemes = opt.schemes;
  if (!opt.si_db.empty()) cfg.exp.si_db = opt.si_db;
  cfg.exp.validate();
  return cfg;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "dtdd";
  for (const std::string& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

std::filesystem::path prepare_out(const CliOptions& opt) {
  std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void note(const CliOptions& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Centralized dynamic-TDD scheduling simulator for full/half-duplex networks"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* c_sim = app.add_subcommand("simulate", "run one topology drop and dump per-slot rates");
  CLI::App* c_pow = app.add_subcommand("sweep-power", "sum rate vs transmit power");
  CLI::App* c_dim = app.add_subcommand("sweep-dim", "sum rate vs deployment area side");
  CLI::App* c_reg = app.add_subcommand("rate-region", "two-group achievable rate region");
  CLI::App* c_fair = app.add_subcommand("fairness", "demand-tracking weight adaptation loop");
  CLI::App* c_gap = app.add_subcommand("oracle-compare",
                                       "iterative solver vs exhaustive search on small instances");
  CLI::App* c_cpx = app.add_subcommand("complexity", "runtime scaling of solver and search");
  for (CLI::App* cmd : {c_sim, c_pow, c_dim, c_reg, c_fair, c_gap, c_cpx}) {
    add_common_options(cmd, opt);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const FullConfig cfg = load_with_overrides(opt);
    const ExecMode mode = opt.serial ? ExecMode::Serial : ExecMode::OpenMp;
    const std::filesystem::path out = prepare_out(opt);
    const std::string command = join_args(args);

    if (c_sim->parsed()) {
      std::vector<std::string> names =
          cfg.exp.schemes.empty() ? std::vector<std::string>{"proposed_fd"} : cfg.exp.schemes;
      for (const std::string& name : names) {
        const Scheme scheme = scheme_from_name(name);
        const SingleRunOutcome run = run_single(cfg, scheme, mode);
        write_rates_csv(out / ("rates_" + name + ".csv"), run.slots);
        const Topology topo = scheme_topology(cfg.sim, scheme, 0);
        std::ofstream tf(out / ("topology_" + name + ".json"), std::ios::binary);
        tf << topo.to_json().dump(2) << "\n";
        double sum = 0.0;
        std::vector<RateRecord> records;
        records.reserve(run.slots.size());
        for (const SlotOutcome& o : run.slots) records.push_back(o.record);
        for (double v : average_rates(records)) sum += v;
        note(opt, "simulate " + name + ": sum rate " + CsvWriter::num(sum) + " bit/s/Hz over " +
                      std::to_string(run.slots.size()) + " slots");
      }
    } else if (c_pow->parsed()) {
      const auto cells = run_power_sweep(cfg, mode);
      write_sweep_csv(out / "sweep_power.csv", cells);
      write_sweep_raw_csv(out / "sweep_power_raw.csv", cells);
      note(opt, "sweep-power: " + std::to_string(cells.size()) + " cells");
    } else if (c_dim->parsed()) {
      const auto cells = run_dim_sweep(cfg, mode);
      write_sweep_csv(out / "sweep_dim.csv", cells);
      write_sweep_raw_csv(out / "sweep_dim_raw.csv", cells);
      note(opt, "sweep-dim: " + std::to_string(cells.size()) + " cells");
    } else if (c_reg->parsed()) {
      const auto cells = run_rate_region(cfg, mode);
      write_region_csv(out / "region.csv", cells);
      write_region_raw_csv(out / "region_raw.csv", cells);
      note(opt, "rate-region: " + std::to_string(cells.size()) + " cells");
    } else if (c_fair->parsed()) {
      const FairnessOutcome fo = run_fairness_experiment(cfg, mode);
      write_fairness_csv(out / "fairness.csv", fo.trace);
      for (std::size_t k = 0; k < fo.tau.size(); ++k) {
        note(opt, "node " + std::to_string(k) + ": demand " + CsvWriter::num(fo.tau[k]) +
                      ", achieved " + CsvWriter::num(fo.final_r_bar_e[k]));
      }
    } else if (c_gap->parsed()) {
      SimConfig osim = cfg.sim;
      osim.n_pairs = cfg.exp.oracle_n_pairs;
      const GapReport report =
          oracle_gap_report(cfg.exp.oracle_instances, osim, cfg.solver, cfg.sim.seed, mode);
      write_gap_csv(out / "oracle_gap.csv", report);
      note(opt, "oracle-compare: mean ratio " + CsvWriter::num(report.mean_ratio()) +
                    ", converged " + CsvWriter::num(report.fraction_converged()) +
                    ", dominated " + std::string(report.all_dominated() ? "yes" : "no"));
    } else if (c_cpx->parsed()) {
      const auto rows = run_complexity(cfg, mode);
      write_complexity_csv(out / "complexity.csv", rows);
      note(opt, "complexity: " + std::to_string(rows.size()) + " rows");
    }

    write_manifest(out / "manifest.json", cfg, command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace dtdd
