#pragma once

// Command-line driver. Exit codes: 0 success, 1 negative answer (no witness,
// extraction failed, certificate rejected), 2 usage, parse or I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/logger.h>
#include <spdlog/sinks/ostream_sink.h>

#include "halin/halin.hpp"

namespace halin::cli {

struct RunConfig {
    std::string family = "hex";
    std::string file;
    std::optional<VertexId> root;
    std::size_t k = 2;
    int r = 1;
    int radius = 8;
    std::size_t t = 1;
    std::int64_t cols = 2;
    std::int64_t depth = 4;
    std::uint64_t seed = 0;
    std::string out;
    std::string cert;  ///< certificate input for verify and mutate

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const {
        if (r < 0) throw std::invalid_argument("--r must be >= 0");
        if (radius <= r) throw std::invalid_argument("--radius must exceed --r");
        if (t < 1) throw std::invalid_argument("--t must be >= 1");
        if (cols < 1) throw std::invalid_argument("--cols must be >= 1");
        if (depth < 1) throw std::invalid_argument("--depth must be >= 1");
    }
};

/// Thrown for conditions that end the run with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a sibling temporary file and a rename, so readers never see a partial file.
inline void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw UsageError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw UsageError("cannot rename onto " + path + ": " + ec.message());
    }
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out.empty()) out << text;
    else write_atomic(cfg.out, text);
}

inline LazyGraph make_graph(const RunConfig& cfg) {
    if (cfg.family == "hex") return LazyGraph::hex_quarter_grid();
    if (cfg.family == "grid2d") return LazyGraph::grid2d();
    if (cfg.family == "binary_tree") return LazyGraph::binary_tree();
    if (cfg.family == "ladder") return LazyGraph::ladder();
    if (cfg.family == "hexprefix") return LazyGraph::finite(hex_prefix({cfg.cols, cfg.depth}));
    if (cfg.family == "file") {
        if (cfg.file.empty()) throw UsageError("--family file needs --file");
        return LazyGraph::finite(load_edge_list(read_file(cfg.file)));
    }
    throw UsageError("unknown family \"" + cfg.family + "\"");
}

inline VertexId root_of(const RunConfig& cfg, const LazyGraph& g) {
    const VertexId root = cfg.root.value_or(g.origin());
    if (!g.valid(root)) throw UsageError("root " + std::to_string(root) + " is not a vertex");
    return root;
}

/// The host a certificate is checked against: the edge-list file if given,
/// otherwise the family truncated at --radius (hexprefix: the whole prefix).
inline FiniteGraph host_graph(const RunConfig& cfg) {
    if (!cfg.file.empty()) return load_edge_list(read_file(cfg.file));
    if (cfg.family == "hexprefix") return hex_prefix({cfg.cols, cfg.depth});
    const auto g = make_graph(cfg);
    return truncate(g, root_of(cfg, g), cfg.radius).graph;
}

inline int cmd_gen(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    if (cfg.family == "hexprefix") {
        emit(cfg, out, store_edge_list(hex_prefix({cfg.cols, cfg.depth})));
        return 0;
    }
    const auto g = make_graph(cfg);
    const auto t = truncate(g, root_of(cfg, g), cfg.radius);
    if (t.clamped()) log.warn("radius clamped from {} to {} by the vertex budget", t.requested_radius, t.radius);
    log.info("ball of radius {}: {} vertices, {} edges", t.radius, t.graph.size(), t.graph.edge_count());
    emit(cfg, out, store_edge_list(t.graph));
    return 0;
}

inline int cmd_witness(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const auto g = make_graph(cfg);
    auto found = thick_end_witness(g, root_of(cfg, g), cfg.k, cfg.r, cfg.radius);
    if (auto* nf = std::get_if<RaysNotFound>(&found)) {
        out << "no witness: " << nf->diagnostic << "\n";
        return 1;
    }
    const auto& w = std::get<EndWitness>(found);
    log.info("found {} rays at radius {}", w.rays.size(), w.radius);
    out << "witness: " << w.rays.size() << " rays, R=" << w.radius << ", r=" << w.equivalence_radius << "\n";
    const auto text = store_witness(w);
    if (cfg.out.empty()) out << text;
    else write_atomic(cfg.out, text);
    return 0;
}

inline int cmd_extract(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const auto g = make_graph(cfg);
    PipelineParams p;
    p.k = cfg.k;
    p.r = cfg.r;
    p.radius = cfg.radius;
    p.t = cfg.t;
    p.spec = {cfg.cols, cfg.depth};
    const auto rep = halin_pipeline(g, root_of(cfg, g), p);
    for (const auto& line : rep.log) log.info("{}", line);
    out << store_report(rep);
    const auto* emb = rep.embedding();
    if (!emb) return 1;
    // the pipeline already re-verified; check once more against exactly what gets written
    const auto text = store_certificate(*emb);
    if (!verify_embedding(rep.host.graph, load_certificate(text)).empty()) return 1;
    if (!cfg.out.empty()) write_atomic(cfg.out, text);
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    if (cfg.cert.empty()) throw UsageError("verify needs a certificate file");
    const auto host = host_graph(cfg);
    const auto emb = load_certificate(read_file(cfg.cert));
    const auto problems = verify_embedding(host, emb);
    log.info("checked cols={} depth={} against {} host vertices", emb.pattern.cols, emb.pattern.depth, host.size());
    if (problems.empty()) {
        out << "ok\n";
        return 0;
    }
    for (const auto& v : problems) out << describe(v) << "\n";
    return 1;
}

inline int cmd_mutate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    if (cfg.cert.empty()) throw UsageError("mutate needs a certificate file");
    Mutation applied{};
    const auto m = mutate_embedding(load_certificate(read_file(cfg.cert)), cfg.seed, &applied);
    log.info("seed {} applied mutation {}", cfg.seed, static_cast<int>(applied));
    emit(cfg, out, store_certificate(m));
    return 0;
}

inline int cmd_dot(const RunConfig& cfg, std::ostream& out, spdlog::logger&) {
    emit(cfg, out, to_dot(host_graph(cfg)));
    return 0;
}

inline spdlog::level::level_enum log_level_from_env() {
    const char* raw = std::getenv("HALIN_LOG");
    if (!raw || !*raw) return spdlog::level::warn;
    const auto lvl = spdlog::level::from_str(raw);
    // from_str maps unknown names to off; keep the default instead
    if (lvl == spdlog::level::off && std::string(raw) != "off") return spdlog::level::warn;
    return lvl;
}

/// Runs one command line (args exclude the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    spdlog::logger log("halin", sink);
    log.set_pattern("[%l] %v");
    log.set_level(log_level_from_env());

    RunConfig cfg;
    CLI::App app{"Thick-end witnesses and hex-grid subdivisions in lazily generated graphs", "halin"};
    app.require_subcommand(1);
    const std::vector<std::string> families{"hex", "grid2d", "binary_tree", "ladder", "hexprefix", "file"};

    auto graph_opts = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "hex, grid2d, binary_tree, ladder, hexprefix or file")
            ->check(CLI::IsMember(families));
        sub->add_option("--file", cfg.file, "edge-list file (with --family file, or as verify/dot host)");
        sub->add_option("--root", cfg.root, "root vertex id (default: the family origin)");
        sub->add_option("--radius", cfg.radius, "truncation radius R");
        sub->add_option("--cols", cfg.cols, "hex-prefix columns");
        sub->add_option("--depth", cfg.depth, "hex-prefix depth");
        sub->add_option("--out", cfg.out, "output file (default: stdout)");
    };
    auto search_opts = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "number of rays");
        sub->add_option("--r", cfg.r, "equivalence radius");
        sub->add_option("--t", cfg.t, "paths required per ray link");
    };

    auto* gen = app.add_subcommand("gen", "write the edge list of a ball around the root");
    graph_opts(gen);
    auto* wit = app.add_subcommand("witness", "search for k disjoint equivalent rays");
    graph_opts(wit);
    search_opts(wit);
    auto* ext = app.add_subcommand("extract", "run the full pipeline and write the certificate");
    graph_opts(ext);
    search_opts(ext);
    auto* ver = app.add_subcommand("verify", "check a certificate against a host graph");
    graph_opts(ver);
    ver->add_option("certificate", cfg.cert, "certificate file")->required();
    auto* mut = app.add_subcommand("mutate", "apply one seeded fault to a certificate");
    mut->add_option("certificate", cfg.cert, "certificate file")->required();
    mut->add_option("--seed", cfg.seed, "mutation seed");
    mut->add_option("--out", cfg.out, "output file (default: stdout)");
    auto* dot = app.add_subcommand("dot", "write a host graph in DOT format");
    graph_opts(dot);

    std::vector<std::string> argv_store{"halin"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        cfg.validate();
        if (*gen) return cmd_gen(cfg, out, log);
        if (*wit) return cmd_witness(cfg, out, log);
        if (*ext) return cmd_extract(cfg, out, log);
        if (*ver) return cmd_verify(cfg, out, log);
        if (*mut) return cmd_mutate(cfg, out, log);
        if (*dot) return cmd_dot(cfg, out, log);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace halin::cli
