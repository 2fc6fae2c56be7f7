#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtdd/fairness.hpp"
#include "dtdd/oracle.hpp"
#include "dtdd/parallel.hpp"

namespace dtdd {

inline constexpr const char* kVersion = "1.0.0";

enum class Scheme { ProposedFd, ProposedHd, ProposedMixed, Bs1, Bs3 };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme scheme);

// Duplex flags implied by the scheme: proposed_fd / bs3 run all-full-duplex,
// proposed_hd / bs1 all-half-duplex, proposed_mixed alternates per pair.
Topology apply_scheme_duplex(const Topology& topo, Scheme scheme);
SlotScheduler scheme_scheduler(Scheme scheme);

// Topology drop for repetition `rep`: generated from the base seed's repetition
// substream, then stamped with the scheme's duplex flags.
Topology scheme_topology(const SimConfig& sim, Scheme scheme, int rep);

enum class WeightRule { Uniform, InverseIndex };

struct FairnessExperimentConfig {
  long calibration_slots = 500;
  long loop_slots = 5000;
  double demand_fraction = 0.5;
  double alpha = 0.1;
  std::string scheme = "proposed_fd";
  double step_c = 1.0;
  double step_d = 2.0;
  double update_sign = -1.0;
};

struct ExperimentConfig {
  int repetitions = 10;
  std::vector<double> power_dbm_grid = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::vector<double> dim_m_grid = {250, 500, 1000, 2000};
  int mu1_points = 11;
  std::vector<std::string> schemes;  // empty = per-experiment default
  std::vector<double> si_db;         // empty = config si_suppression_db
  WeightRule weights = WeightRule::InverseIndex;
  int oracle_instances = 500;
  int oracle_n_pairs = 4;
  std::vector<int> complexity_nodes = {4, 6, 8, 10, 12};
  int complexity_slots = 50;
  FairnessExperimentConfig fairness;

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j, const ExperimentConfig& defaults);
  nlohmann::json to_json() const;
};

struct FullConfig {
  SimConfig sim;
  SolverConfig solver;
  ExperimentConfig exp;

  static FullConfig from_json(const nlohmann::json& j);
  static FullConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// One sweep cell (x value, scheme, self-interference level) with per-repetition
// outcomes. Failed repetitions carry an error message and are excluded from the
// aggregate.
struct CellResult {
  double x_value = 0.0;
  Scheme scheme = Scheme::ProposedFd;
  double si_db = 0.0;
  std::vector<double> rep_sum_rate;    // indexed by repetition
  std::vector<std::string> rep_error;  // empty string = ok
  double mean_sum_rate = 0.0;
  double stderr_mean = 0.0;
  long n_ok = 0;
};

std::vector<CellResult> run_power_sweep(const FullConfig& cfg, ExecMode mode);
std::vector<CellResult> run_dim_sweep(const FullConfig& cfg, ExecMode mode);

struct RegionCell {
  double mu1 = 0.0;
  Scheme scheme = Scheme::ProposedHd;
  std::vector<double> rep_group1, rep_group2;
  std::vector<std::string> rep_error;
  double rate_group1 = 0.0;
  double rate_group2 = 0.0;
  long n_ok = 0;
};

std::vector<RegionCell> run_rate_region(const FullConfig& cfg, ExecMode mode);

struct ComplexityRow {
  int n_nodes = 0;
  std::string method;
  double mean_time_us = 0.0;
  long n_samples = 0;
};

std::vector<ComplexityRow> run_complexity(const FullConfig& cfg, ExecMode mode);

struct FairnessOutcome {
  std::vector<double> unconstrained_rate;  // calibration averages, per node
  std::vector<double> tau;
  std::vector<double> final_r_bar_e;
  std::vector<double> final_mu;
  std::vector<FairnessTraceRow> trace;
};

FairnessOutcome run_fairness_experiment(const FullConfig& cfg, ExecMode mode);

// Single-run records for one scheme (slot-major) plus the weights used.
struct SingleRunOutcome {
  Scheme scheme = Scheme::ProposedFd;
  std::vector<SlotOutcome> slots;
  WeightVector mu;
};

SingleRunOutcome run_single(const FullConfig& cfg, Scheme scheme, ExecMode mode);

// CSV / manifest serialization. All writers are deterministic: identical inputs
// produce identical bytes.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<CellResult>& cells);
void write_sweep_raw_csv(const std::filesystem::path& path, const std::vector<CellResult>& cells);
void write_region_csv(const std::filesystem::path& path, const std::vector<RegionCell>& cells);
void write_region_raw_csv(const std::filesystem::path& path, const std::vector<RegionCell>& cells);
void write_gap_csv(const std::filesystem::path& path, const GapReport& report);
void write_complexity_csv(const std::filesystem::path& path,
                          const std::vector<ComplexityRow>& rows);
void write_fairness_csv(const std::filesystem::path& path,
                        const std::vector<FairnessTraceRow>& trace);
void write_rates_csv(const std::filesystem::path& path, const std::vector<SlotOutcome>& slots);
void write_manifest(const std::filesystem::path& path, const FullConfig& cfg,
                    const std::string& command);

// Full command-line entry point (argument vector without the program name).
// Returns the process exit code: 0 success, 1 configuration/usage error,
// 2 runtime failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace dtdd
