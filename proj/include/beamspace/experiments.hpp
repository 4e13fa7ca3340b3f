#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamspace/analysis.hpp"
#include "beamspace/measurement.hpp"
#include "beamspace/types.hpp"

namespace beamspace {

enum class EstimatorKind { SD, OMP, SMD, PerfectCSI };

enum class ExperimentKind { NmseVsSnr, NmseVsQ, SumRateVsDlSnr };

enum class OutputFormat { Csv, Json };

/// Full parameterization of one Monte Carlo sweep. The JSON configuration
/// file mirrors these fields with keys N, K, N_RF, L, V, Q, snr_ul_db,
/// snr_dl_db, trials, seed, estimators, noise_mode, experiment.
struct ExperimentConfig {
    Index num_antennas = 256;  // N
    Index num_users = 16;      // K
    Index num_rf_chains = 16;  // N_RF
    Index num_nlos = 2;        // L
    Index window = 8;          // V
    std::vector<Index> q_values = {96};
    std::vector<double> snr_ul_db = {10.0};
    std::vector<double> snr_dl_db = {};
    Index trials = 500;
    std::uint64_t seed = 1;
    std::vector<EstimatorKind> estimators = {EstimatorKind::SD, EstimatorKind::OMP};
    NoiseMode noise_mode = NoiseMode::Faithful;
    ExperimentKind experiment = ExperimentKind::NmseVsSnr;
};

struct ResultRow {
    std::string experiment;
    std::string estimator;
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0;
    Index trials = 0;
    Index failures = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

const char* estimator_name(EstimatorKind kind);
const char* experiment_name(ExperimentKind kind);
const char* noise_mode_name(NoiseMode mode);

/// Throws std::invalid_argument when the configuration violates any
/// structural constraint of its experiment kind.
void validate(const ExperimentConfig& cfg);

/// Parses a configuration from JSON text; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);

/// Loads a configuration file from disk.
ExperimentConfig load_config(const std::string& path);

/// Stable 64-bit hash (hex) of the canonical serialized configuration.
std::string config_hash(const ExperimentConfig& cfg);

/// Runs the NMSE-vs-SNR or NMSE-vs-Q Monte Carlo sweep. Per-trial random
/// streams are derived from (seed, sweep index, trial), so the table is
/// byte-identical for any thread count.
ResultTable run_nmse_sweep(const ExperimentConfig& cfg, int threads = 1);

/// Runs the sum-rate-vs-downlink-SNR study: estimates uplink channels once
/// per trial, selects beams, zero-forces, and evaluates the rate on the true
/// reduced channel over the downlink SNR grid.
ResultTable run_sumrate_sweep(const ExperimentConfig& cfg, int threads = 1);

/// Dispatches on cfg.experiment.
ResultTable run_experiment(const ExperimentConfig& cfg, int threads = 1);

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);
ResultTable table_from_json(const std::string& json_text);

/// Writes the table to `path` in the requested format.
void emit_results(const ResultTable& table, const std::string& path, OutputFormat format);

/// Serializes a bound report for the CLI; a vacuous amplitude threshold is
/// emitted as the string "vacuous".
std::string bound_report_json(const BoundReport<double>& report);

} // namespace beamspace
