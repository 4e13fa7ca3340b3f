#include "beamspace/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "beamspace/beam_selection.hpp"
#include "beamspace/channel.hpp"
#include "beamspace/estimators.hpp"
#include "beamspace/rng.hpp"

namespace beamspace {

namespace {

using json = nlohmann::json;

constexpr const char* kCsvHeader =
    "experiment,estimator,sweep_param,sweep_value,metric,mean,stderr,trials,failures,seed,"
    "config_hash";

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "SD") return EstimatorKind::SD;
    if (name == "OMP") return EstimatorKind::OMP;
    if (name == "SMD") return EstimatorKind::SMD;
    if (name == "PerfectCSI") return EstimatorKind::PerfectCSI;
    throw std::invalid_argument("unknown estimator: " + name);
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "NmseVsSnr") return ExperimentKind::NmseVsSnr;
    if (name == "NmseVsQ") return ExperimentKind::NmseVsQ;
    if (name == "SumRateVsDlSnr") return ExperimentKind::SumRateVsDlSnr;
    throw std::invalid_argument("unknown experiment: " + name);
}

NoiseMode noise_mode_from_name(const std::string& name) {
    if (name == "Faithful") return NoiseMode::Faithful;
    if (name == "WhiteNoise") return NoiseMode::WhiteNoise;
    throw std::invalid_argument("unknown noise mode: " + name);
}

/// Canonical JSON form of a configuration; field order is fixed by the
/// library's alphabetical key ordering so the serialization is stable.
json canonical_json(const ExperimentConfig& cfg) {
    json j;
    j["N"] = cfg.num_antennas;
    j["K"] = cfg.num_users;
    j["N_RF"] = cfg.num_rf_chains;
    j["L"] = cfg.num_nlos;
    j["V"] = cfg.window;
    j["Q"] = cfg.q_values;
    j["snr_ul_db"] = cfg.snr_ul_db;
    j["snr_dl_db"] = cfg.snr_dl_db;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    json est = json::array();
    for (EstimatorKind kind : cfg.estimators) {
        est.push_back(estimator_name(kind));
    }
    j["estimators"] = est;
    j["noise_mode"] = noise_mode_name(cfg.noise_mode);
    j["experiment"] = experiment_name(cfg.experiment);
    return j;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Runs `body(trial)` for every trial index, optionally on a thread pool.
/// Results must be written to per-trial slots so the outcome is identical
/// for any thread count.
void parallel_for_trials(Index trials, int threads, const std::function<void(Index)>& body) {
    if (threads <= 1 || trials <= 1) {
        for (Index t = 0; t < trials; ++t) {
            body(t);
        }
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const Index t = next.fetch_add(1);
            if (t >= trials) {
                return;
            }
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(trials));
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

struct Aggregate {
    double mean = 0.0;
    double std_error = 0.0;
    Index count = 0;
};

/// Mean and standard error (sample std / sqrt(count)) over the successful
/// trials, accumulated in trial order.
Aggregate aggregate_trials(const std::vector<std::optional<double>>& values) {
    Aggregate agg;
    double sum = 0.0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++agg.count;
        }
    }
    if (agg.count == 0) {
        return agg;
    }
    agg.mean = sum / static_cast<double>(agg.count);
    if (agg.count > 1) {
        double ss = 0.0;
        for (const auto& v : values) {
            if (v) {
                const double d = *v - agg.mean;
                ss += d * d;
            }
        }
        const double sample_var = ss / static_cast<double>(agg.count - 1);
        agg.std_error = std::sqrt(sample_var / static_cast<double>(agg.count));
    }
    return agg;
}

/// Beam-domain channels of all users for one trial, as columns of an N x K
/// matrix (plus the per-user view the estimator interfaces expect).
struct TrialChannels {
    std::vector<BeamspaceChannel<double>> beamspace;
    std::vector<Vector<double>> truth;
};

TrialChannels draw_channels(const ExperimentConfig& cfg, const BeamspaceTransform<double>& t,
                            Rng& rng) {
    TrialChannels out;
    Matrix<double> h(cfg.num_antennas, cfg.num_users);
    ChannelGenConfig<double> gen;
    gen.num_antennas = cfg.num_antennas;
    gen.num_nlos = cfg.num_nlos;
    for (Index k = 0; k < cfg.num_users; ++k) {
        h.col(k) = generate_spatial_channel(gen, rng).vector;
    }
    Matrix<double> hb = t.matrix * h;
    out.beamspace.reserve(static_cast<std::size_t>(cfg.num_users));
    out.truth.reserve(static_cast<std::size_t>(cfg.num_users));
    for (Index k = 0; k < cfg.num_users; ++k) {
        BeamspaceChannel<double> ch;
        ch.vector = hb.col(k);
        out.beamspace.push_back(ch);
        out.truth.emplace_back(hb.col(k));
    }
    return out;
}

bool uses_measurements(EstimatorKind kind) {
    return kind == EstimatorKind::SD || kind == EstimatorKind::OMP;
}

} // namespace

const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::SD: return "SD";
        case EstimatorKind::OMP: return "OMP";
        case EstimatorKind::SMD: return "SMD";
        case EstimatorKind::PerfectCSI: return "PerfectCSI";
    }
    return "?";
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::NmseVsSnr: return "NmseVsSnr";
        case ExperimentKind::NmseVsQ: return "NmseVsQ";
        case ExperimentKind::SumRateVsDlSnr: return "SumRateVsDlSnr";
    }
    return "?";
}

const char* noise_mode_name(NoiseMode mode) {
    return mode == NoiseMode::Faithful ? "Faithful" : "WhiteNoise";
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.num_antennas < 1 || cfg.num_users < 1 || cfg.num_rf_chains < 1) {
        throw std::invalid_argument("config: dimensions must be positive");
    }
    if (cfg.num_nlos < 0) {
        throw std::invalid_argument("config: L must be non-negative");
    }
    if (cfg.window < 1 || cfg.window * (cfg.num_nlos + 1) > cfg.num_antennas) {
        throw std::invalid_argument("config: V(L+1) must lie within [1, N]");
    }
    if (cfg.trials < 1) {
        throw std::invalid_argument("config: trials must be positive");
    }
    if (cfg.q_values.empty()) {
        throw std::invalid_argument("config: Q must be given");
    }
    for (Index q : cfg.q_values) {
        if (q < 1) {
            throw std::invalid_argument("config: Q values must be positive");
        }
    }
    if (cfg.snr_ul_db.empty()) {
        throw std::invalid_argument("config: snr_ul_db must be non-empty");
    }
    if (cfg.estimators.empty()) {
        throw std::invalid_argument("config: estimators must be non-empty");
    }
    for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.estimators.size(); ++j) {
            if (cfg.estimators[i] == cfg.estimators[j]) {
                throw std::invalid_argument("config: duplicate estimator");
            }
        }
    }
    const bool any_measured = std::any_of(cfg.estimators.begin(), cfg.estimators.end(),
                                          [](EstimatorKind k) { return uses_measurements(k); });
    if (any_measured && cfg.noise_mode == NoiseMode::Faithful) {
        // the faithful pipeline transmits complete pilot blocks of K instants
        for (Index q : cfg.q_values) {
            if (q % cfg.num_users != 0) {
                throw std::invalid_argument("config: Q must be divisible by K for SD/OMP runs");
            }
        }
    }
    switch (cfg.experiment) {
        case ExperimentKind::NmseVsSnr:
            if (cfg.q_values.size() != 1) {
                throw std::invalid_argument("config: NmseVsSnr takes a single Q");
            }
            break;
        case ExperimentKind::NmseVsQ:
            if (cfg.snr_ul_db.size() != 1) {
                throw std::invalid_argument("config: NmseVsQ takes a single uplink SNR");
            }
            break;
        case ExperimentKind::SumRateVsDlSnr:
            if (cfg.q_values.size() != 1) {
                throw std::invalid_argument("config: SumRateVsDlSnr takes a single Q");
            }
            if (cfg.snr_ul_db.size() != 1) {
                throw std::invalid_argument("config: SumRateVsDlSnr takes a single uplink SNR");
            }
            if (cfg.snr_dl_db.empty()) {
                throw std::invalid_argument("config: SumRateVsDlSnr needs a downlink SNR grid");
            }
            if (cfg.num_rf_chains != cfg.num_users) {
                throw std::invalid_argument("config: SumRateVsDlSnr assumes N_RF == K");
            }
            break;
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: top-level JSON object expected");
    }
    static const char* known[] = {"N",      "K",          "N_RF",       "L",
                                  "V",      "Q",          "snr_ul_db",  "snr_dl_db",
                                  "trials", "seed",       "estimators", "noise_mode",
                                  "experiment"};
    for (const auto& item : j.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return item.key() == k;
            }) == std::end(known)) {
            throw std::invalid_argument("config: unknown key \"" + item.key() + "\"");
        }
    }

    ExperimentConfig cfg;
    try {
        cfg.experiment = experiment_from_name(j.at("experiment").get<std::string>());
        cfg.num_antennas = j.at("N").get<Index>();
        cfg.num_users = j.at("K").get<Index>();
        cfg.num_rf_chains = j.value("N_RF", cfg.num_users);
        cfg.num_nlos = j.at("L").get<Index>();
        cfg.window = j.at("V").get<Index>();
        const json& q = j.at("Q");
        cfg.q_values.clear();
        if (q.is_array()) {
            for (const auto& v : q) {
                cfg.q_values.push_back(v.get<Index>());
            }
        } else {
            cfg.q_values.push_back(q.get<Index>());
        }
        cfg.snr_ul_db = j.at("snr_ul_db").get<std::vector<double>>();
        cfg.snr_dl_db = j.value("snr_dl_db", std::vector<double>{});
        cfg.trials = j.at("trials").get<Index>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.estimators.clear();
        for (const auto& name : j.at("estimators")) {
            cfg.estimators.push_back(estimator_from_name(name.get<std::string>()));
        }
        cfg.noise_mode = noise_mode_from_name(j.value("noise_mode", std::string("Faithful")));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string canonical = canonical_json(cfg).dump();
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    return buf;
}

ResultTable run_nmse_sweep(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    if (cfg.experiment != ExperimentKind::NmseVsSnr && cfg.experiment != ExperimentKind::NmseVsQ) {
        throw std::invalid_argument("run_nmse_sweep: wrong experiment kind");
    }
    const bool sweep_q = cfg.experiment == ExperimentKind::NmseVsQ;
    const std::vector<double> sweep_values = [&] {
        std::vector<double> v;
        if (sweep_q) {
            for (Index q : cfg.q_values) {
                v.push_back(static_cast<double>(q));
            }
        } else {
            v = cfg.snr_ul_db;
        }
        return v;
    }();

    const std::string hash = config_hash(cfg);
    const BeamspaceTransform<double> transform =
        build_beamspace_transform<double>(cfg.num_antennas);
    const Index num_paths = cfg.num_nlos + 1;
    const Index sparsity = cfg.window * num_paths;

    ResultTable table;
    for (std::size_t sweep_idx = 0; sweep_idx < sweep_values.size(); ++sweep_idx) {
        const Index q = sweep_q ? cfg.q_values[sweep_idx] : cfg.q_values[0];
        const double snr_db = sweep_q ? cfg.snr_ul_db[0] : cfg.snr_ul_db[sweep_idx];
        const double sigma2 = 1.0 / db_to_linear(snr_db);

        std::vector<std::vector<std::optional<double>>> per_estimator(
            cfg.estimators.size(),
            std::vector<std::optional<double>>(static_cast<std::size_t>(cfg.trials)));

        parallel_for_trials(cfg.trials, threads, [&](Index trial) {
            Rng rng_channels = substream(cfg.seed, {sweep_idx, std::uint64_t(trial), 0});
            Rng rng_combiner = substream(cfg.seed, {sweep_idx, std::uint64_t(trial), 1});
            Rng rng_noise = substream(cfg.seed, {sweep_idx, std::uint64_t(trial), 2});
            Rng rng_smd = substream(cfg.seed, {sweep_idx, std::uint64_t(trial), 3});

            const TrialChannels channels = draw_channels(cfg, transform, rng_channels);
            Combiner<double> w;
            MeasurementSet<double> meas;
            const bool need_meas =
                std::any_of(cfg.estimators.begin(), cfg.estimators.end(), uses_measurements);
            if (need_meas) {
                w = generate_combiner<double>(q, cfg.num_antennas, rng_combiner);
                meas = simulate_uplink(channels.beamspace, w, sigma2, cfg.noise_mode, rng_noise);
            }

            for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
                const EstimatorKind kind = cfg.estimators[e];
                try {
                    double total = 0.0;
                    for (Index k = 0; k < cfg.num_users; ++k) {
                        const auto uk = static_cast<std::size_t>(k);
                        switch (kind) {
                            case EstimatorKind::SD:
                                total += nmse(sd_estimate(meas.per_user[uk], w, cfg.num_nlos,
                                                          cfg.window)
                                                  .vector,
                                              channels.truth[uk]);
                                break;
                            case EstimatorKind::OMP:
                                total += nmse(omp_estimate(meas.per_user[uk], w, sparsity).vector,
                                              channels.truth[uk]);
                                break;
                            case EstimatorKind::SMD:
                                total += nmse(smd_estimate(channels.beamspace[uk], sigma2,
                                                           sparsity, rng_smd)
                                                  .vector,
                                              channels.truth[uk]);
                                break;
                            case EstimatorKind::PerfectCSI:
                                total += 0.0;
                                break;
                        }
                    }
                    per_estimator[e][static_cast<std::size_t>(trial)] =
                        total / static_cast<double>(cfg.num_users);
                } catch (const std::runtime_error&) {
                    per_estimator[e][static_cast<std::size_t>(trial)] = std::nullopt;
                }
            }
        });

        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            const Aggregate agg = aggregate_trials(per_estimator[e]);
            ResultRow row;
            row.experiment = experiment_name(cfg.experiment);
            row.estimator = estimator_name(cfg.estimators[e]);
            row.sweep_param = sweep_q ? "q" : "snr_ul_db";
            row.sweep_value = sweep_values[sweep_idx];
            row.metric = "nmse";
            row.mean = agg.mean;
            row.std_error = agg.std_error;
            row.trials = agg.count;
            row.failures = cfg.trials - agg.count;
            row.seed = cfg.seed;
            row.config_hash = hash;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

ResultTable run_sumrate_sweep(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    if (cfg.experiment != ExperimentKind::SumRateVsDlSnr) {
        throw std::invalid_argument("run_sumrate_sweep: wrong experiment kind");
    }
    const std::string hash = config_hash(cfg);
    const BeamspaceTransform<double> transform =
        build_beamspace_transform<double>(cfg.num_antennas);
    const Index q = cfg.q_values[0];
    const double sigma2_ul = 1.0 / db_to_linear(cfg.snr_ul_db[0]);
    const Index sparsity = cfg.window * (cfg.num_nlos + 1);
    const std::size_t num_points = cfg.snr_dl_db.size();

    // values[estimator][trial] holds the rate at every downlink SNR point,
    // or nothing when the estimator or precoder failed in that trial.
    std::vector<std::vector<std::optional<std::vector<double>>>> values(
        cfg.estimators.size(),
        std::vector<std::optional<std::vector<double>>>(static_cast<std::size_t>(cfg.trials)));

    parallel_for_trials(cfg.trials, threads, [&](Index trial) {
        Rng rng_channels = substream(cfg.seed, {0, std::uint64_t(trial), 0});
        Rng rng_combiner = substream(cfg.seed, {0, std::uint64_t(trial), 1});
        Rng rng_noise = substream(cfg.seed, {0, std::uint64_t(trial), 2});
        Rng rng_smd = substream(cfg.seed, {0, std::uint64_t(trial), 3});

        const TrialChannels channels = draw_channels(cfg, transform, rng_channels);
        Combiner<double> w;
        MeasurementSet<double> meas;
        const bool need_meas =
            std::any_of(cfg.estimators.begin(), cfg.estimators.end(), uses_measurements);
        if (need_meas) {
            w = generate_combiner<double>(q, cfg.num_antennas, rng_combiner);
            meas = simulate_uplink(channels.beamspace, w, sigma2_ul, cfg.noise_mode, rng_noise);
        }

        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            const EstimatorKind kind = cfg.estimators[e];
            try {
                std::vector<Vector<double>> estimates;
                estimates.reserve(static_cast<std::size_t>(cfg.num_users));
                for (Index k = 0; k < cfg.num_users; ++k) {
                    const auto uk = static_cast<std::size_t>(k);
                    switch (kind) {
                        case EstimatorKind::SD:
                            estimates.push_back(
                                sd_estimate(meas.per_user[uk], w, cfg.num_nlos, cfg.window)
                                    .vector);
                            break;
                        case EstimatorKind::OMP:
                            estimates.push_back(
                                omp_estimate(meas.per_user[uk], w, sparsity).vector);
                            break;
                        case EstimatorKind::SMD:
                            estimates.push_back(
                                smd_estimate(channels.beamspace[uk], sigma2_ul, sparsity, rng_smd)
                                    .vector);
                            break;
                        case EstimatorKind::PerfectCSI:
                            estimates.push_back(channels.truth[uk]);
                            break;
                    }
                }
                const BeamSelection selection = ia_beam_select(estimates, cfg.num_rf_chains);
                const Matrix<double> true_reduced =
                    reduce_to_beams(channels.truth, selection.beams);
                const Matrix<double> est_reduced = reduce_to_beams(estimates, selection.beams);
                std::vector<double> rates(num_points);
                for (std::size_t d = 0; d < num_points; ++d) {
                    const double rho = db_to_linear(cfg.snr_dl_db[d]);
                    const PrecodingResult<double> p = zf_precoder(est_reduced, rho);
                    rates[d] = sum_rate(true_reduced, p, 1.0);
                }
                values[e][static_cast<std::size_t>(trial)] = std::move(rates);
            } catch (const std::runtime_error&) {
                values[e][static_cast<std::size_t>(trial)] = std::nullopt;
            }
        }
    });

    ResultTable table;
    for (std::size_t d = 0; d < num_points; ++d) {
        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            std::vector<std::optional<double>> point_values(
                static_cast<std::size_t>(cfg.trials));
            for (Index t = 0; t < cfg.trials; ++t) {
                const auto& trial_rates = values[e][static_cast<std::size_t>(t)];
                if (trial_rates) {
                    point_values[static_cast<std::size_t>(t)] = (*trial_rates)[d];
                }
            }
            const Aggregate agg = aggregate_trials(point_values);
            ResultRow row;
            row.experiment = experiment_name(cfg.experiment);
            row.estimator = estimator_name(cfg.estimators[e]);
            row.sweep_param = "snr_dl_db";
            row.sweep_value = cfg.snr_dl_db[d];
            row.metric = "sum_rate";
            row.mean = agg.mean;
            row.std_error = agg.std_error;
            row.trials = agg.count;
            row.failures = cfg.trials - agg.count;
            row.seed = cfg.seed;
            row.config_hash = hash;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg, int threads) {
    if (cfg.experiment == ExperimentKind::SumRateVsDlSnr) {
        return run_sumrate_sweep(cfg, threads);
    }
    return run_nmse_sweep(cfg, threads);
}

std::string to_csv(const ResultTable& table) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const ResultRow& row : table.rows) {
        out << row.experiment << ',' << row.estimator << ',' << row.sweep_param << ','
            << format_double(row.sweep_value) << ',' << row.metric << ','
            << format_double(row.mean) << ',' << format_double(row.std_error) << ','
            << row.trials << ',' << row.failures << ',' << row.seed << ',' << row.config_hash
            << '\n';
    }
    return out.str();
}

std::string to_json(const ResultTable& table) {
    json rows = json::array();
    for (const ResultRow& row : table.rows) {
        json j;
        j["experiment"] = row.experiment;
        j["estimator"] = row.estimator;
        j["sweep_param"] = row.sweep_param;
        j["sweep_value"] = row.sweep_value;
        j["metric"] = row.metric;
        j["mean"] = row.mean;
        j["stderr"] = row.std_error;
        j["trials"] = row.trials;
        j["failures"] = row.failures;
        j["seed"] = row.seed;
        j["config_hash"] = row.config_hash;
        rows.push_back(std::move(j));
    }
    return rows.dump(2) + "\n";
}

ResultTable table_from_json(const std::string& json_text) {
    const json rows = json::parse(json_text);
    if (!rows.is_array()) {
        throw std::invalid_argument("result table: JSON array expected");
    }
    ResultTable table;
    for (const auto& j : rows) {
        ResultRow row;
        row.experiment = j.at("experiment").get<std::string>();
        row.estimator = j.at("estimator").get<std::string>();
        row.sweep_param = j.at("sweep_param").get<std::string>();
        row.sweep_value = j.at("sweep_value").get<double>();
        row.metric = j.at("metric").get<std::string>();
        row.mean = j.at("mean").get<double>();
        row.std_error = j.at("stderr").get<double>();
        row.trials = j.at("trials").get<Index>();
        row.failures = j.at("failures").get<Index>();
        row.seed = j.at("seed").get<std::uint64_t>();
        row.config_hash = j.at("config_hash").get<std::string>();
        table.rows.push_back(std::move(row));
    }
    return table;
}

void emit_results(const ResultTable& table, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("emit_results: cannot open " + path);
    }
    out << (format == OutputFormat::Csv ? to_csv(table) : to_json(table));
    if (!out) {
        throw std::runtime_error("emit_results: write failed for " + path);
    }
}

std::string bound_report_json(const BoundReport<double>& report) {
    json j;
    j["N"] = report.num_antennas;
    j["V"] = report.retained;
    j["alpha"] = report.alpha;
    j["mu"] = report.mu;
    j["sigma2_ul"] = report.sigma2_ul;
    json values;
    for (const auto& [name, value] : report.values) {
        if (value) {
            values[name] = *value;
        } else {
            values[name] = "vacuous";
        }
    }
    j["values"] = values;
    return j.dump(2) + "\n";
}

} // namespace beamspace
