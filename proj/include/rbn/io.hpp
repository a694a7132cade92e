#pragma once

// File formats:
//   network        line-oriented text, lossless round trip (bias via %.17g)
//   attractor set  JSON: n, not_found, attractors (period, basin_hits, states)
//   matrices/CSV   distance matrices, clustering reports, merge tables,
//                  summary tables, histograms
// CSV floats carry 6 decimal digits; integer-valued measures are written as
// integers.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbn/cluster.hpp"
#include "rbn/distance.hpp"
#include "rbn/network.hpp"
#include "rbn/stats.hpp"

namespace rbn {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& source, std::size_t line, const std::string& msg)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg) {}
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
}

inline std::string f6(double v) { return fmt("%.6f", v); }
inline std::string g17(double v) { return fmt("%.17g", v); }

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

inline double parse_double(const std::string& text, const std::string& source,
                           std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(source, line, "expected a number, got '" + text + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& source,
                               std::size_t line) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(source, line, "expected an integer, got '" + text + "'");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Network text format

inline constexpr std::string_view kNetworkMagic = "rbn-network v1";

struct NetworkFile {
    BooleanNetwork net;
    double bias;
    std::uint64_t seed;
};

inline void save_network(std::ostream& out, const BooleanNetwork& net,
                         double bias, std::uint64_t seed) {
    out << kNetworkMagic << "\n";
    out << "n " << net.n() << "\n";
    out << "k " << net.k() << "\n";
    out << "bias " << detail::g17(bias) << "\n";
    out << "seed " << seed << "\n";
    for (std::size_t i = 0; i < net.n(); ++i) {
        const auto& node = net.node(i);
        out << "node " << i;
        for (auto in : node.inputs)
            out << ' ' << in;
        out << ' ';
        for (auto entry : node.table)
            out << (entry ? '1' : '0');
        out << "\n";
    }
}

inline void save_network(const std::filesystem::path& path,
                         const BooleanNetwork& net, double bias,
                         std::uint64_t seed) {
    auto out = detail::open_out(path);
    save_network(out, net, bias, seed);
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

inline NetworkFile load_network(std::istream& in, const std::string& source) {
    std::size_t lineno = 0;
    std::string line;
    auto next_line = [&](const char* what) -> std::string& {
        if (!std::getline(in, line))
            throw ParseError(source, lineno + 1,
                             std::string("unexpected end of file, expected ") + what);
        ++lineno;
        return line;
    };
    auto header_value = [&](const char* key) {
        next_line(key);
        std::istringstream fields(line);
        std::string name, value, extra;
        if (!(fields >> name >> value) || name != key || (fields >> extra))
            throw ParseError(source, lineno,
                             std::string("expected '") + key + " <value>'");
        return value;
    };

    if (next_line("header") != kNetworkMagic)
        throw ParseError(source, lineno, "bad magic line");
    const auto n = static_cast<std::size_t>(
        detail::parse_u64(header_value("n"), source, lineno));
    const auto k = static_cast<std::size_t>(
        detail::parse_u64(header_value("k"), source, lineno));
    const double bias = detail::parse_double(header_value("bias"), source, lineno);
    const std::uint64_t seed = detail::parse_u64(header_value("seed"), source, lineno);

    std::vector<NodeFunction> nodes;
    nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        next_line("node line");
        std::istringstream fields(line);
        std::string tag;
        std::size_t idx = 0;
        if (!(fields >> tag >> idx) || tag != "node" || idx != i)
            throw ParseError(source, lineno,
                             "expected 'node " + std::to_string(i) + " ...'");
        NodeFunction node;
        node.inputs.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            std::uint32_t input = 0;
            if (!(fields >> input))
                throw ParseError(source, lineno, "missing input index");
            node.inputs.push_back(input);
        }
        std::string table;
        std::string extra;
        if (!(fields >> table))
            throw ParseError(source, lineno, "missing truth table");
        if (fields >> extra)
            throw ParseError(source, lineno, "trailing fields after truth table");
        if (table.size() != (std::size_t{1} << k))
            throw ParseError(source, lineno, "truth table must have 2^k entries");
        node.table.reserve(table.size());
        for (char c : table) {
            if (c != '0' && c != '1')
                throw ParseError(source, lineno, "truth table entries must be 0/1");
            node.table.push_back(c == '1' ? 1 : 0);
        }
        nodes.push_back(std::move(node));
    }
    try {
        return NetworkFile{BooleanNetwork(n, k, std::move(nodes)), bias, seed};
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, lineno, e.what());
    }
}

inline NetworkFile load_network(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return load_network(in, path.string());
}

// ---------------------------------------------------------------------------
// Attractor set JSON

inline void save_attractor_set(const std::filesystem::path& path,
                               const AttractorSet& set) {
    nlohmann::ordered_json doc;
    doc["n"] = set.n;
    doc["not_found"] = set.not_found;
    doc["attractors"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < set.attractors.size(); ++i) {
        const auto& a = set.attractors[i];
        nlohmann::ordered_json entry;
        entry["period"] = a.period();
        entry["basin_hits"] = set.basin_hits[i];
        auto states = nlohmann::ordered_json::array();
        for (std::size_t h = 0; h < a.period(); ++h)
            states.push_back(a.state(h).to_string());
        entry["states"] = std::move(states);
        doc["attractors"].push_back(std::move(entry));
    }
    auto out = detail::open_out(path);
    out << doc.dump(2) << "\n";
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

inline AttractorSet load_attractor_set(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    try {
        const auto n = doc.at("n").get<std::size_t>();
        detail::AttractorAccumulator acc(n);
        acc.add_not_found(doc.at("not_found").get<std::uint64_t>());
        for (const auto& entry : doc.at("attractors")) {
            std::vector<NetworkState> cycle;
            for (const auto& text : entry.at("states")) {
                auto s = NetworkState::from_string(text.get<std::string>());
                if (s.size() != n)
                    throw std::invalid_argument("state length does not match n");
                cycle.push_back(std::move(s));
            }
            if (cycle.size() != entry.at("period").get<std::size_t>())
                throw std::invalid_argument("period does not match state count");
            acc.add(canonicalize(cycle), entry.at("basin_hits").get<std::uint64_t>());
        }
        return acc.finish();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), 0, e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

// ---------------------------------------------------------------------------
// Distance matrix CSV

inline void save_distance_matrix(const std::filesystem::path& path,
                                 const DistanceMatrix& dm) {
    auto out = detail::open_out(path);
    out << "label";
    for (const auto& label : dm.labels)
        out << ',' << label;
    out << "\n";
    const bool integral = integer_valued(dm.measure);
    for (std::size_t i = 0; i < dm.size(); ++i) {
        out << dm.labels[i];
        for (std::size_t j = 0; j < dm.size(); ++j) {
            if (integral)
                out << ',' << static_cast<long long>(dm.at(i, j));
            else
                out << ',' << detail::f6(dm.at(i, j));
        }
        out << "\n";
    }
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

inline DistanceMatrix load_distance_matrix(const std::filesystem::path& path,
                                           Measure measure) {
    auto in = detail::open_in(path);
    const std::string source = path.string();
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw ParseError(source, 1, "empty file");
    ++lineno;
    auto header = detail::split_csv(line);
    if (header.empty() || header[0] != "label")
        throw ParseError(source, lineno, "expected 'label,...' header");
    DistanceMatrix dm;
    dm.measure = measure;
    dm.labels.assign(header.begin() + 1, header.end());
    const std::size_t n = dm.labels.size();
    if (n == 0)
        throw ParseError(source, lineno, "matrix has no labels");
    dm.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw ParseError(source, lineno + 1, "missing matrix row");
        ++lineno;
        auto cells = detail::split_csv(line);
        if (cells.size() != n + 1)
            throw ParseError(source, lineno, "wrong number of columns");
        if (cells[0] != dm.labels[i])
            throw ParseError(source, lineno, "row label does not match header");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = detail::parse_double(cells[j + 1], source, lineno);
            if (v < 0.0)
                throw ParseError(source, lineno, "negative distance");
            if (integer_valued(measure) && v != static_cast<double>(static_cast<long long>(v)))
                throw ParseError(source, lineno, "expected an integer distance");
            dm.values[i * n + j] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dm.at(i, i) != 0.0)
            throw ParseError(source, 0, "nonzero diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm.at(i, j) != dm.at(j, i))
                throw ParseError(source, 0, "matrix is not symmetric");
    }
    return dm;
}

// ---------------------------------------------------------------------------
// Clustering report, merge table, Newick

inline void save_clustering_report(const std::filesystem::path& path,
                                   const std::vector<std::string>& labels,
                                   const ClusteringReport& report) {
    auto out = detail::open_out(path);
    out << "node,coefficient\n";
    for (std::size_t i = 0; i < report.per_node.size(); ++i) {
        out << labels[i] << ',';
        if (report.per_node[i])
            out << detail::f6(*report.per_node[i]);
        else
            out << "NA";
        out << "\n";
    }
    out << "network," << detail::f6(report.network) << "\n";
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

/// Reads back the network-level coefficient from a report file.
inline double load_report_network_coefficient(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::string line;
    std::size_t lineno = 0;
    std::optional<double> network;
    while (std::getline(in, line)) {
        ++lineno;
        auto cells = detail::split_csv(line);
        if (cells.size() == 2 && cells[0] == "network")
            network = detail::parse_double(cells[1], path.string(), lineno);
    }
    if (!network)
        throw ParseError(path.string(), lineno, "no 'network,<value>' line found");
    return *network;
}

inline void save_merges(const std::filesystem::path& path, const Dendrogram& d) {
    auto out = detail::open_out(path);
    out << "step,left,right,height\n";
    for (std::size_t m = 0; m < d.merges.size(); ++m)
        out << m << ',' << d.merges[m].left << ',' << d.merges[m].right << ','
            << detail::f6(d.merges[m].height) << "\n";
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

inline void save_newick(const std::filesystem::path& path, const Dendrogram& d) {
    auto out = detail::open_out(path);
    out << newick_export(d) << "\n";
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Summary tables and histograms

struct SummaryRow {
    double bias = 0.0;
    std::optional<SummaryStats> stats;  // nullopt when the pool was empty
};

inline void save_summary_table(const std::filesystem::path& path,
                               const std::vector<SummaryRow>& rows) {
    auto out = detail::open_out(path);
    out << "bias,min,q1,median,mean,q3,max\n";
    for (const auto& row : rows) {
        out << detail::f6(row.bias);
        if (row.stats) {
            const auto& s = *row.stats;
            for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max})
                out << ',' << detail::f6(v);
        } else {
            out << ",NA,NA,NA,NA,NA,NA";
        }
        out << "\n";
    }
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

inline SummaryStats load_summary_row(const std::filesystem::path& path,
                                     double bias) {
    auto in = detail::open_in(path);
    std::string line;
    std::size_t lineno = 0;
    std::getline(in, line);  // header
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        auto cells = detail::split_csv(line);
        if (cells.size() != 7)
            throw ParseError(path.string(), lineno, "expected 7 columns");
        if (cells[1] == "NA")
            continue;
        const double row_bias = detail::parse_double(cells[0], path.string(), lineno);
        if (detail::f6(bias) == detail::f6(row_bias)) {
            SummaryStats s;
            s.min = detail::parse_double(cells[1], path.string(), lineno);
            s.q1 = detail::parse_double(cells[2], path.string(), lineno);
            s.median = detail::parse_double(cells[3], path.string(), lineno);
            s.mean = detail::parse_double(cells[4], path.string(), lineno);
            s.q3 = detail::parse_double(cells[5], path.string(), lineno);
            s.max = detail::parse_double(cells[6], path.string(), lineno);
            return s;
        }
    }
    throw ParseError(path.string(), lineno, "no row for requested bias");
}

inline void save_histogram(const std::filesystem::path& path, const Histogram& h) {
    auto out = detail::open_out(path);
    out << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << detail::f6(h.edges[b]) << ',' << detail::f6(h.edges[b + 1]) << ','
            << h.counts[b] << "\n";
    if (!out.good())
        throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rbn
