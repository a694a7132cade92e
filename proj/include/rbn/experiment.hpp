#pragma once

// End-to-end experiment pipeline: generate an ensemble of networks per bias,
// sample attractors, compute distance matrices, clustering coefficients and
// dendrograms per network, then pool distances per bias into summary tables
// and histogram the per-network clustering coefficients.
//
// Determinism: the per-network seeds are derive_seed(root, 2*bias_index,
// net_index) for generation and derive_seed(root, 2*bias_index + 1,
// net_index) for sampling, the per-network pipelines are independent, and
// pooled aggregation runs in fixed (bias, network) order. The same config
// gives byte-identical output trees regardless of the worker count.
//
// Output layout, one directory per bias, one subdirectory per network:
//   out/
//     manifest.json
//     summary_<measure>.csv               pooled six-number rows, one per bias
//     per_network_<measure>.csv           per-network summaries (diagnostics)
//     bias<ii>_<bias>/
//       coefficients_<measure>.csv        per-network clustering coefficient
//       coefficient_hist_<measure>.csv    histogram of the above
//       net<jjj>/
//         network.txt  attractors.json  distances_<measure>.csv
//         clustering_<measure>.csv  dendrogram_<measure>.nwk
//         merges_<measure>.csv

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbn/attractor.hpp"
#include "rbn/cluster.hpp"
#include "rbn/distance.hpp"
#include "rbn/io.hpp"
#include "rbn/network.hpp"
#include "rbn/rng.hpp"
#include "rbn/stats.hpp"

namespace rbn {

inline constexpr std::string_view kToolVersion = "rbn 0.1.0";
inline constexpr const char* kWorkersEnvVar = "RBN_WORKERS";

struct ExperimentConfig {
    std::size_t n = 70;
    std::size_t k = 3;
    std::vector<double> biases{0.5, 0.788675, 0.85};
    std::size_t networks_per_bias = 50;
    std::uint64_t samples_per_network = 100'000;
    std::uint64_t max_steps = 1'000'000;
    std::optional<std::size_t> memory_cap;
    std::vector<Measure> measures{Measure::min_hamming, Measure::euclidean,
                                  Measure::pseudo_hamming};
    std::size_t bins = 10;
    std::uint64_t root_seed = 0;
    std::filesystem::path output_dir;
    std::size_t workers = 0;  // 0 = RBN_WORKERS env var, else hardware threads
};

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n == 0 || cfg.k == 0 || cfg.k > cfg.n)
        throw std::invalid_argument("experiment: need n >= 1 and 1 <= k <= n");
    if (cfg.biases.empty())
        throw std::invalid_argument("experiment: need at least one bias");
    for (double b : cfg.biases)
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("experiment: bias outside [0, 1]");
    if (cfg.networks_per_bias == 0 || cfg.samples_per_network == 0 ||
        cfg.max_steps == 0 || cfg.bins == 0)
        throw std::invalid_argument("experiment: counts must be >= 1");
    if (cfg.measures.empty())
        throw std::invalid_argument("experiment: need at least one measure");
    if (cfg.output_dir.empty())
        throw std::invalid_argument("experiment: output directory not set");
}

struct NetworkRecord {
    std::size_t bias_index = 0;
    double bias = 0.0;
    std::size_t net_index = 0;
    std::uint64_t generation_seed = 0;
    std::uint64_t sampling_seed = 0;
    std::size_t attractor_count = 0;
    std::uint64_t not_found = 0;
    bool clustering_skipped = false;  // fewer than 3 attractors
};

struct RunManifest {
    std::string version;
    std::vector<NetworkRecord> networks;
    double wall_seconds = 0.0;  // reported, never serialized
};

namespace detail {

inline std::size_t resolve_workers(std::size_t configured) {
    if (configured > 0)
        return configured;
    if (const char* env = std::getenv(kWorkersEnvVar)) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(0..jobs) on a bounded pool; rethrows the first job exception.
inline void run_jobs(std::size_t jobs, std::size_t workers,
                     const std::function<void(std::size_t)>& fn) {
    workers = std::min(workers == 0 ? std::size_t{1} : workers, jobs);
    if (workers <= 1) {
        for (std::size_t j = 0; j < jobs; ++j)
            fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs)
                return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(jobs);  // drain remaining work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline std::string bias_dir_name(std::size_t index, double bias) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "bias%02zu_%.6f", index, bias);
    return std::string(buf);
}

inline std::string net_dir_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "net%03zu", index);
    return std::string(buf);
}

struct NetworkResult {
    std::size_t attractor_count = 0;
    std::uint64_t not_found = 0;
    bool clustering_skipped = true;
    std::vector<std::vector<double>> pooled;        // per measure, upper triangle
    std::vector<std::optional<double>> coefficient; // per measure, network C
};

}  // namespace detail

inline RunManifest run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const bool create_root = !fs::exists(cfg.output_dir);
    if (!create_root) {
        if (!fs::is_directory(cfg.output_dir))
            throw std::runtime_error("experiment: output path is not a directory");
        if (fs::directory_iterator(cfg.output_dir) != fs::directory_iterator{})
            throw std::runtime_error("experiment: output directory is not empty");
    }
    fs::create_directories(cfg.output_dir);

    const std::size_t n_bias = cfg.biases.size();
    const std::size_t n_nets = cfg.networks_per_bias;
    const std::size_t n_meas = cfg.measures.size();
    const std::size_t jobs = n_bias * n_nets;
    std::vector<detail::NetworkResult> results(jobs);

    auto run_one = [&](std::size_t job) {
        const std::size_t bias_index = job / n_nets;
        const std::size_t net_index = job % n_nets;
        const double bias = cfg.biases[bias_index];
        const std::uint64_t gen_seed = derive_seed(
            cfg.root_seed, static_cast<std::uint32_t>(2 * bias_index),
            static_cast<std::uint32_t>(net_index));
        const std::uint64_t sample_seed = derive_seed(
            cfg.root_seed, static_cast<std::uint32_t>(2 * bias_index + 1),
            static_cast<std::uint32_t>(net_index));

        const fs::path net_dir = cfg.output_dir /
                                 detail::bias_dir_name(bias_index, bias) /
                                 detail::net_dir_name(net_index);
        fs::create_directories(net_dir);

        const BooleanNetwork net =
            generate_rbn({cfg.n, cfg.k, bias, gen_seed});
        save_network(net_dir / "network.txt", net, bias, gen_seed);

        const SearchConfig search{cfg.max_steps, cfg.memory_cap};
        const AttractorSet set =
            sample_attractors(net, cfg.samples_per_network, search, sample_seed);
        save_attractor_set(net_dir / "attractors.json", set);

        auto& result = results[job];
        result.attractor_count = set.attractors.size();
        result.not_found = set.not_found;
        result.clustering_skipped = set.attractors.size() < 3;
        result.pooled.resize(n_meas);
        result.coefficient.resize(n_meas);

        for (std::size_t m = 0; m < n_meas; ++m) {
            const Measure measure = cfg.measures[m];
            if (set.attractors.empty())
                continue;
            const std::string tag = measure_tag(measure);
            const fs::path matrix_path = net_dir / ("distances_" + tag + ".csv");
            save_distance_matrix(matrix_path, distance_matrix(set, measure));
            // Downstream stages consume the serialized matrix, so running
            // simulate/distances/cluster by hand reproduces these files
            // byte for byte.
            const DistanceMatrix dm = load_distance_matrix(matrix_path, measure);
            for (std::size_t i = 0; i < dm.size(); ++i)
                for (std::size_t j = i + 1; j < dm.size(); ++j)
                    result.pooled[m].push_back(dm.at(i, j));
            if (dm.size() >= 2) {
                const Dendrogram dendro = single_link_dendrogram(dm);
                save_newick(net_dir / ("dendrogram_" + tag + ".nwk"), dendro);
                save_merges(net_dir / ("merges_" + tag + ".csv"), dendro);
            }
            if (dm.size() >= 3) {
                const ClusteringReport report =
                    clustering_report(weights_from_distances(dm));
                save_clustering_report(net_dir / ("clustering_" + tag + ".csv"),
                                       dm.labels, report);
                result.coefficient[m] = report.network;
            }
        }
    };

    RunManifest manifest;
    try {
        detail::run_jobs(jobs, detail::resolve_workers(cfg.workers), run_one);

        // Aggregation in fixed (bias, network) order.
        for (std::size_t m = 0; m < n_meas; ++m) {
            const std::string tag = measure_tag(cfg.measures[m]);
            std::vector<SummaryRow> pooled_rows;
            auto per_net = detail::open_out(cfg.output_dir /
                                            ("per_network_" + tag + ".csv"));
            per_net << "bias_index,bias,network,pairs,min,q1,median,mean,q3,max\n";
            for (std::size_t b = 0; b < n_bias; ++b) {
                std::vector<double> pool;
                std::vector<double> coefficients;
                for (std::size_t j = 0; j < n_nets; ++j) {
                    const auto& result = results[b * n_nets + j];
                    const auto& values = result.pooled[m];
                    pool.insert(pool.end(), values.begin(), values.end());
                    per_net << b << ',' << detail::f6(cfg.biases[b]) << ',' << j
                            << ',' << values.size();
                    if (values.empty()) {
                        per_net << ",NA,NA,NA,NA,NA,NA\n";
                    } else {
                        const SummaryStats s = summary(values);
                        for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max})
                            per_net << ',' << detail::f6(v);
                        per_net << "\n";
                    }
                    if (result.coefficient[m])
                        coefficients.push_back(
                            std::clamp(*result.coefficient[m], 0.0, 1.0));
                }
                pooled_rows.push_back(
                    {cfg.biases[b], pool.empty()
                                        ? std::nullopt
                                        : std::optional<SummaryStats>(summary(pool))});

                const fs::path bias_dir =
                    cfg.output_dir / detail::bias_dir_name(b, cfg.biases[b]);
                auto coeff_out =
                    detail::open_out(bias_dir / ("coefficients_" + tag + ".csv"));
                coeff_out << "network,coefficient\n";
                for (std::size_t j = 0; j < n_nets; ++j) {
                    const auto& c = results[b * n_nets + j].coefficient[m];
                    coeff_out << j << ',';
                    if (c)
                        coeff_out << detail::f6(std::clamp(*c, 0.0, 1.0));
                    else
                        coeff_out << "NA";
                    coeff_out << "\n";
                }
                save_histogram(bias_dir / ("coefficient_hist_" + tag + ".csv"),
                               clustering_histogram(coefficients, cfg.bins));
            }
            save_summary_table(cfg.output_dir / ("summary_" + tag + ".csv"),
                               pooled_rows);
        }

        // Manifest, written last.
        manifest.version = std::string(kToolVersion);
        nlohmann::ordered_json doc;
        doc["version"] = manifest.version;
        nlohmann::ordered_json config;
        config["n"] = cfg.n;
        config["k"] = cfg.k;
        config["biases"] = cfg.biases;
        config["networks_per_bias"] = cfg.networks_per_bias;
        config["samples_per_network"] = cfg.samples_per_network;
        config["max_steps"] = cfg.max_steps;
        if (cfg.memory_cap)
            config["memory_cap"] = *cfg.memory_cap;
        else
            config["memory_cap"] = nullptr;
        auto measure_names = nlohmann::ordered_json::array();
        for (Measure m : cfg.measures)
            measure_names.push_back(std::string(measure_name(m)));
        config["measures"] = std::move(measure_names);
        config["bins"] = cfg.bins;
        config["root_seed"] = cfg.root_seed;
        doc["config"] = std::move(config);
        doc["networks"] = nlohmann::ordered_json::array();
        for (std::size_t job = 0; job < jobs; ++job) {
            const std::size_t b = job / n_nets;
            const std::size_t j = job % n_nets;
            NetworkRecord rec;
            rec.bias_index = b;
            rec.bias = cfg.biases[b];
            rec.net_index = j;
            rec.generation_seed = derive_seed(
                cfg.root_seed, static_cast<std::uint32_t>(2 * b),
                static_cast<std::uint32_t>(j));
            rec.sampling_seed = derive_seed(
                cfg.root_seed, static_cast<std::uint32_t>(2 * b + 1),
                static_cast<std::uint32_t>(j));
            rec.attractor_count = results[job].attractor_count;
            rec.not_found = results[job].not_found;
            rec.clustering_skipped = results[job].clustering_skipped;
            manifest.networks.push_back(rec);

            nlohmann::ordered_json entry;
            entry["bias_index"] = rec.bias_index;
            entry["bias"] = rec.bias;
            entry["network_index"] = rec.net_index;
            entry["generation_seed"] = rec.generation_seed;
            entry["sampling_seed"] = rec.sampling_seed;
            entry["attractors"] = rec.attractor_count;
            entry["not_found"] = rec.not_found;
            entry["clustering_skipped"] = rec.clustering_skipped;
            doc["networks"].push_back(std::move(entry));
        }
        auto out = detail::open_out(cfg.output_dir / "manifest.json");
        out << doc.dump(2) << "\n";
        if (!out.good())
            throw std::runtime_error("write failed: manifest.json");
    } catch (...) {
        // Leave no partial output tree behind.
        std::error_code ec;
        if (create_root) {
            fs::remove_all(cfg.output_dir, ec);
        } else {
            for (const auto& entry : fs::directory_iterator(cfg.output_dir, ec))
                fs::remove_all(entry.path(), ec);
        }
        throw;
    }

    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return manifest;
}

}  // namespace rbn
