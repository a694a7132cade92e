// rbn -- command line front end.
//
// Subcommands: generate, simulate, distances, cluster, stats, experiment.
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbn/rbn.hpp"

namespace fs = std::filesystem;

namespace {

rbn::Measure parse_measure_or_usage(const std::string& name) {
    try {
        return rbn::parse_measure(name);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--measure", e.what());
    }
}

void add_generate(CLI::App& app) {
    auto* cmd = app.add_subcommand("generate", "Generate random Boolean networks");
    struct GenOpts {
        std::size_t n = 70;
        std::size_t k = 3;
        double bias = 0.5;
        std::uint64_t seed = 0;
        std::size_t count = 1;
        std::string out;
    };
    auto opts = std::make_shared<GenOpts>();
    cmd->add_option("--n", opts->n, "Node count")->capture_default_str();
    cmd->add_option("--k", opts->k, "Inputs per node")->capture_default_str();
    cmd->add_option("--bias", opts->bias, "Probability of a 1 table entry")
        ->capture_default_str();
    cmd->add_option("--seed", opts->seed, "Generation seed")->required();
    cmd->add_option("--count", opts->count, "Number of networks")
        ->capture_default_str();
    cmd->add_option("--out", opts->out,
                    "Output file (count = 1) or directory (count > 1)")
        ->required();
    cmd->callback([opts] {
        if (opts->count == 1) {
            const auto net = rbn::generate_rbn(
                {opts->n, opts->k, opts->bias, opts->seed});
            rbn::save_network(fs::path(opts->out), net, opts->bias, opts->seed);
            return;
        }
        fs::create_directories(opts->out);
        for (std::size_t i = 0; i < opts->count; ++i) {
            const std::uint64_t seed =
                rbn::derive_seed(opts->seed, 0, static_cast<std::uint32_t>(i));
            const auto net =
                rbn::generate_rbn({opts->n, opts->k, opts->bias, seed});
            rbn::save_network(fs::path(opts->out) /
                                  (rbn::detail::net_dir_name(i) + ".txt"),
                              net, opts->bias, seed);
        }
    });
}

void add_simulate(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "simulate", "Sample attractors of one network from random initial states");
    struct SimOpts {
        std::string network;
        std::uint64_t samples = 100000;
        std::uint64_t max_steps = 1000000;
        std::optional<std::size_t> memory_cap;
        std::uint64_t seed = 0;
        std::string out;
    };
    auto opts = std::make_shared<SimOpts>();
    cmd->add_option("--network", opts->network, "Network file")->required();
    cmd->add_option("--samples", opts->samples, "Number of initial states")
        ->capture_default_str();
    cmd->add_option("--max-steps", opts->max_steps, "Step budget per trajectory")
        ->capture_default_str();
    cmd->add_option("--memory-cap", opts->memory_cap,
                    "Max stored states per trajectory");
    cmd->add_option("--seed", opts->seed, "Sampling seed")->required();
    cmd->add_option("--out", opts->out, "Attractor set JSON output")->required();
    cmd->callback([opts] {
        const auto loaded = rbn::load_network(fs::path(opts->network));
        const rbn::SearchConfig cfg{opts->max_steps, opts->memory_cap};
        const auto set =
            rbn::sample_attractors(loaded.net, opts->samples, cfg, opts->seed);
        rbn::save_attractor_set(fs::path(opts->out), set);
    });
}

void add_distances(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "distances", "Distance matrix of an attractor set under one measure");
    struct DistOpts {
        std::string attractors;
        std::string measure;
        std::string out;
    };
    auto opts = std::make_shared<DistOpts>();
    cmd->add_option("--attractors", opts->attractors, "Attractor set JSON")
        ->required();
    cmd->add_option("--measure", opts->measure,
                    "min-hamming | euclidean | pseudo-hamming")
        ->required();
    cmd->add_option("--out", opts->out, "Matrix CSV output")->required();
    cmd->callback([opts] {
        const rbn::Measure measure = parse_measure_or_usage(opts->measure);
        const auto set = rbn::load_attractor_set(fs::path(opts->attractors));
        rbn::save_distance_matrix(fs::path(opts->out),
                                  rbn::distance_matrix(set, measure));
    });
}

void add_cluster(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "cluster",
        "Clustering coefficients and single-link dendrogram of a distance matrix");
    struct ClusterOpts {
        std::string matrix;
        std::string measure;
        std::string report;
        std::string newick;
        std::string merges;
    };
    auto opts = std::make_shared<ClusterOpts>();
    cmd->add_option("--matrix", opts->matrix, "Distance matrix CSV")->required();
    cmd->add_option("--measure", opts->measure,
                    "min-hamming | euclidean | pseudo-hamming")
        ->required();
    cmd->add_option("--report", opts->report, "Clustering coefficient CSV output");
    cmd->add_option("--newick", opts->newick, "Dendrogram Newick output");
    cmd->add_option("--merges", opts->merges, "Dendrogram merge table CSV output");
    cmd->callback([opts] {
        if (opts->report.empty() && opts->newick.empty() && opts->merges.empty())
            throw CLI::ValidationError(
                "cluster", "need at least one of --report/--newick/--merges");
        const rbn::Measure measure = parse_measure_or_usage(opts->measure);
        const auto dm = rbn::load_distance_matrix(fs::path(opts->matrix), measure);
        if (!opts->newick.empty() || !opts->merges.empty()) {
            const auto dendro = rbn::single_link_dendrogram(dm);
            if (!opts->newick.empty())
                rbn::save_newick(fs::path(opts->newick), dendro);
            if (!opts->merges.empty())
                rbn::save_merges(fs::path(opts->merges), dendro);
        }
        if (!opts->report.empty()) {
            if (dm.size() < 3)
                throw std::runtime_error(
                    "cluster: coefficients need at least 3 attractors");
            const auto report =
                rbn::clustering_report(rbn::weights_from_distances(dm));
            rbn::save_clustering_report(fs::path(opts->report), dm.labels, report);
        }
    });
}

void add_stats(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "stats", "Pool distance matrices into summary statistics and histograms");
    struct StatsOpts {
        std::string measure;
        double bias = 0.0;
        std::vector<std::string> matrices;
        std::string summary_out;
        std::vector<std::string> reports;
        std::size_t bins = 10;
        std::string hist_out;
    };
    auto opts = std::make_shared<StatsOpts>();
    cmd->add_option("--measure", opts->measure,
                    "min-hamming | euclidean | pseudo-hamming")
        ->required();
    cmd->add_option("--bias", opts->bias, "Bias value written to the summary row")
        ->capture_default_str();
    cmd->add_option("--matrices", opts->matrices, "Distance matrix CSV files");
    cmd->add_option("--summary-out", opts->summary_out, "Summary table CSV output");
    cmd->add_option("--reports", opts->reports,
                    "Clustering report CSVs to histogram (network coefficients)");
    cmd->add_option("--bins", opts->bins, "Histogram bin count")
        ->capture_default_str();
    cmd->add_option("--hist-out", opts->hist_out, "Histogram CSV output");
    cmd->callback([opts] {
        const rbn::Measure measure = parse_measure_or_usage(opts->measure);
        if (!opts->summary_out.empty()) {
            if (opts->matrices.empty())
                throw CLI::ValidationError("stats",
                                           "--summary-out needs --matrices");
            std::vector<rbn::DistanceMatrix> mats;
            mats.reserve(opts->matrices.size());
            for (const auto& path : opts->matrices)
                mats.push_back(rbn::load_distance_matrix(fs::path(path), measure));
            const auto pooled = rbn::pool_distances(mats);
            rbn::save_summary_table(
                fs::path(opts->summary_out),
                {{opts->bias, pooled.empty() ? std::nullopt
                                             : std::optional<rbn::SummaryStats>(
                                                   rbn::summary(pooled))}});
        }
        if (!opts->hist_out.empty()) {
            std::vector<double> coefficients;
            coefficients.reserve(opts->reports.size());
            for (const auto& path : opts->reports)
                coefficients.push_back(std::clamp(
                    rbn::load_report_network_coefficient(fs::path(path)), 0.0, 1.0));
            rbn::save_histogram(
                fs::path(opts->hist_out),
                rbn::clustering_histogram(coefficients, opts->bins));
        }
        if (opts->summary_out.empty() && opts->hist_out.empty())
            throw CLI::ValidationError("stats",
                                       "need --summary-out or --hist-out");
    });
}

void add_experiment(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "experiment", "Full pipeline over an ensemble of networks per bias");
    struct ExpOpts {
        rbn::ExperimentConfig cfg;
        std::vector<double> biases;
        std::vector<std::string> measures;
        std::string out;
    };
    auto opts = std::make_shared<ExpOpts>();
    cmd->set_config("--config", "", "Config file (key = value), overridden by flags");
    cmd->add_option("--n", opts->cfg.n, "Node count")->capture_default_str();
    cmd->add_option("--k", opts->cfg.k, "Inputs per node")->capture_default_str();
    cmd->add_option("--bias", opts->biases,
                    "Bias value, repeatable (default: 0.5 0.788675 0.85)");
    cmd->add_option("--nets", opts->cfg.networks_per_bias, "Networks per bias")
        ->capture_default_str();
    cmd->add_option("--samples", opts->cfg.samples_per_network,
                    "Initial states per network")
        ->capture_default_str();
    cmd->add_option("--max-steps", opts->cfg.max_steps,
                    "Step budget per trajectory")
        ->capture_default_str();
    cmd->add_option("--memory-cap", opts->cfg.memory_cap,
                    "Max stored states per trajectory");
    cmd->add_option("--measure", opts->measures,
                    "Distance measure, repeatable (default: all three)");
    cmd->add_option("--bins", opts->cfg.bins, "Histogram bin count")
        ->capture_default_str();
    cmd->add_option("--seed", opts->cfg.root_seed, "Root seed")->required();
    cmd->add_option("--out", opts->out, "Output directory")->required();
    cmd->callback([opts] {
        if (!opts->biases.empty())
            opts->cfg.biases = opts->biases;
        if (!opts->measures.empty()) {
            opts->cfg.measures.clear();
            for (const auto& name : opts->measures)
                opts->cfg.measures.push_back(parse_measure_or_usage(name));
        }
        opts->cfg.output_dir = opts->out;
        const auto manifest = rbn::run_experiment(opts->cfg);
        std::cerr << "experiment: " << manifest.networks.size()
                  << " networks -> " << opts->out << " ("
                  << manifest.wall_seconds << " s)\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random Boolean Network attractor analysis toolkit", "rbn"};
    app.require_subcommand(1);
    add_generate(app);
    add_simulate(app);
    add_distances(app);
    add_cluster(app);
    add_stats(app);
    add_experiment(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n"
                  << "run 'rbn --help' for usage\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
