#include "cli.hpp"

#include "sandnet/capacity.hpp"
#include "sandnet/engine.hpp"
#include "sandnet/error.hpp"
#include "sandnet/experiments.hpp"
#include "sandnet/io.hpp"
#include "sandnet/kernels.hpp"
#include "sandnet/metrics.hpp"
#include "sandnet/roster.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace sandnet::cli {

namespace fs = std::filesystem;

namespace {

// Resolved flags of one invocation, in a fixed order.
class Effective {
public:
    explicit Effective(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    template <typename T>
    Effective& add(std::string_view flag, const T& value) {
        std::ostringstream v;
        v << value;
        flags_.emplace_back(flag, v.str());
        return *this;
    }

    std::string line() const {
        std::ostringstream out;
        out << kToolName << ' ' << kToolVersion << ' ' << subcommand_;
        for (const auto& [flag, value] : flags_) out << " --" << flag << ' ' << value;
        return out.str();
    }

private:
    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> flags_;
};

std::string with_comment(std::string_view comment, std::string_view body) {
    return "# " + std::string(comment) + "\n" + std::string(body);
}

Roster load_roster(const fs::path& path) {
    return parse_roster(io::read_file(path));
}

// Second column of a "node,<value>[,...]" CSV, in node order.
std::vector<double> load_node_values(const fs::path& path, std::size_t n) {
    std::vector<double> values;
    bool header = false;
    std::size_t line_no = 0;
    const std::string text = io::read_file(path);
    for (auto line : io::lines(text)) {
        ++line_no;
        line = io::trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        auto fields = io::split(line, ',');
        if (fields.size() < 2) throw ParseError(line_no, "expected 'node,value'");
        try {
            values.push_back(std::stod(std::string(fields[1])));
        } catch (const std::exception&) {
            throw ParseError(line_no, "bad value '" + std::string(fields[1]) + "'");
        }
    }
    if (values.size() != n) {
        throw ValidationError(path.string() + " has " + std::to_string(values.size()) + " rows for " +
                              std::to_string(n) + " nodes");
    }
    return values;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto field : io::split(text, ',')) {
        auto t = io::trim(field);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

void apply_isa(const std::string& isa) {
    kernels::select(kernels::parse_isa(isa));
}

struct GenRosterArgs {
    std::size_t students = 53;
    std::size_t groups = 13;
    std::size_t semesters = 3;
    std::uint64_t seed = 0;
    std::string majors = "CS,ENG,MGT,PW,BIO";
    std::string years = "2,3,4";
    std::string out;
};

int gen_roster(const GenRosterArgs& a, std::ostream& err) {
    SyntheticRosterParams params;
    params.students = a.students;
    params.groups = a.groups;
    params.semesters = a.semesters;
    params.majors = split_list(a.majors);
    params.years.clear();
    for (const auto& y : split_list(a.years)) params.years.push_back(std::stoi(y));

    Effective eff("gen-roster");
    eff.add("students", a.students).add("groups", a.groups).add("semesters", a.semesters).add("seed", a.seed);
    eff.add("majors", a.majors).add("years", a.years).add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const Roster roster = generate_synthetic_roster(params, a.seed);
    io::write_atomic(a.out, with_comment(eff.line(), emit_roster(roster)));
    err << "wrote " << roster.size() << " students to " << a.out << '\n';
    return 0;
}

struct BuildFanArgs {
    std::string roster;
    std::string out;
};

int build_fan_cmd(const BuildFanArgs& a, std::ostream& err) {
    Effective eff("build-fan");
    eff.add("roster", a.roster).add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const Graph g = build_fan(load_roster(a.roster));
    fs::path labels = a.out;
    labels.replace_extension(".labels.csv");
    io::write_atomic(a.out, with_comment(eff.line(), emit_edge_list(g)));
    io::write_atomic(labels, with_comment(eff.line(), emit_label_map(g)));
    err << "FAN: " << g.size() << " nodes, " << g.edge_count() << " edges -> " << a.out << '\n';
    return 0;
}

struct GridArgs {
    std::size_t width = 3;
    std::size_t height = 3;
    bool sink = false;
    std::string out;
};

int grid_cmd(const GridArgs& a, std::ostream& err) {
    Effective eff("grid");
    eff.add("width", a.width).add("height", a.height).add("sink", a.sink ? "true" : "false").add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const auto grid = grid_graph(a.width, a.height, a.sink);
    std::string body = emit_edge_list(grid.graph);
    if (grid.sink) body = "# sink " + std::to_string(*grid.sink) + "\n" + body;
    io::write_atomic(a.out, with_comment(eff.line(), body));
    if (grid.sink) err << "sink node: " << *grid.sink << '\n';
    return 0;
}

struct CapacitiesArgs {
    std::string graph;
    std::optional<std::size_t> nodes;
    std::string K = "880";
    std::string P = "1";
    std::string g = "0.1";
    bool real_p = false;
    std::string out;
};

int capacities_cmd(const CapacitiesArgs& a, std::ostream& out, std::ostream& err) {
    Effective eff("capacities");
    eff.add("graph", a.graph).add("K", a.K).add("P", a.P).add("g", a.g);
    if (a.real_p) eff.add("real-P", "true");
    if (a.nodes) eff.add("nodes", *a.nodes);
    if (!a.out.empty()) eff.add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const Graph g = load_graph_file(a.graph, a.nodes);
    const Rational K = parse_rational(a.K);
    const Rational dissipation = parse_rational(a.g);

    std::vector<Rational> k;
    std::optional<int> integer_p;
    const Rational p_value = parse_rational(a.P);
    if (boost::multiprecision::denominator(p_value) == 1) {
        integer_p = boost::multiprecision::numerator(p_value).convert_to<int>();
        k = capacities(g, K, *integer_p);
    } else {
        if (!a.real_p) throw ValidationError("non-integer P requires --real-P");
        for (double v : capacities_real(g, to_double(K), to_double(p_value))) k.push_back(rational_from_double(v));
    }

    const auto report = validate_capacities(g, k, dissipation);
    if (!a.out.empty()) {
        std::ostringstream csv;
        csv << "node,k\n";
        for (NodeId i = 0; i < g.size(); ++i) csv << i << ',' << io::format_double(to_double(k[i])) << '\n';
        io::write_atomic(a.out, with_comment(eff.line(), csv.str()));
    }
    out << std::left << std::setw(6) << "node" << std::right << std::setw(6) << "deg" << std::setw(14) << "k"
        << std::setw(10) << "deg+g" << "  ok\n";
    for (const auto& c : report.nodes) {
        out << std::left << std::setw(6) << c.node << std::right << std::setw(6) << g.degree(c.node) << std::setw(14)
            << c.capacity << std::setw(10) << c.required << "  " << (c.ok ? "yes" : "NO") << '\n';
    }
    if (integer_p) {
        err << "minimum feasible K at this P: " << to_double(minimum_feasible_K(g, *integer_p, dissipation))
            << " (printed bound " << to_double(paper_min_K(g, *integer_p, dissipation)) << ")\n";
    }
    if (!report.ok()) {
        err << "capacity validation failed: k_i >= deg(i) + g does not hold at\n";
        for (const auto& c : report.nodes) {
            if (!c.ok) err << "  node " << c.node << ": k = " << c.capacity << " < " << c.required << '\n';
        }
        return 1;
    }
    err << "capacity validation passed for all " << g.size() << " nodes\n";
    return 0;
}

struct SimulateArgs {
    std::string graph;
    std::optional<std::size_t> nodes;
    std::string K = "880";
    int P = 1;
    std::optional<std::string> g;
    std::uint64_t X = 2500;
    std::uint64_t seed = 0;
    std::string mode = "sinkless";
    std::vector<NodeId> sinks;
    std::string arith = "exact";
    std::string drops;
    std::string out;
};

int simulate_cmd(const SimulateArgs& a, std::ostream& err) {
    SimulationConfig cfg;
    if (a.mode == "sinkless") {
        cfg.mode = EngineMode::sinkless;
    } else if (a.mode == "asm_oracle") {
        cfg.mode = EngineMode::asm_oracle;
    } else {
        throw ValidationError("--mode must be sinkless or asm_oracle");
    }
    if (a.arith == "exact") {
        cfg.arithmetic = Arithmetic::exact;
    } else if (a.arith == "fast") {
        cfg.arithmetic = Arithmetic::fast;
    } else {
        throw ValidationError("--arith must be exact or fast");
    }
    const std::string g_text = a.g.value_or(cfg.mode == EngineMode::sinkless ? "0.1" : "0");

    Effective eff("simulate");
    eff.add("graph", a.graph);
    if (a.nodes) eff.add("nodes", *a.nodes);
    if (cfg.mode == EngineMode::sinkless) eff.add("K", a.K).add("P", a.P);
    eff.add("g", g_text).add("X", a.X).add("seed", a.seed).add("mode", a.mode).add("arith", a.arith);
    for (NodeId s : a.sinks) eff.add("sinks", s);
    if (!a.drops.empty()) eff.add("drops", a.drops);
    eff.add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const Graph g = load_graph_file(a.graph, a.nodes);
    cfg.g = parse_rational(g_text);
    cfg.grains = a.X;
    cfg.seed = a.seed;
    cfg.sinks = a.sinks;
    cfg.k = cfg.mode == EngineMode::sinkless ? capacities(g, parse_rational(a.K), a.P) : classic_asm_thresholds(g);
    if (!a.drops.empty()) cfg.forced_drops = parse_drop_file(io::read_file(a.drops), g.size());

    const auto result = simulate(g, cfg);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    const fs::path dir(a.out);
    const std::string line = eff.line();
    io::write_atomic(dir / "ntnt.csv", emit_ntnt_csv(result, line));
    io::write_atomic(dir / "topples.csv", emit_topples_csv(result, line));
    io::write_atomic(dir / "final_state.csv", emit_final_state_csv(result, line));
    err << "dropped " << result.drops << " grains, " << result.total_topples() << " topples -> " << a.out << '\n';
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string out;
    std::size_t jobs = 1;
    std::optional<std::size_t> burn_in;
};

std::string config_dir_name(const ConfigResult& c) {
    return c.network + "_P" + std::to_string(c.P);
}

int sweep_cmd(const SweepArgs& a, std::ostream& err) {
    const fs::path config_path(a.config);
    SweepConfig cfg = parse_sweep_json(io::read_file(config_path), config_path.parent_path());
    if (a.burn_in) cfg.burn_in = *a.burn_in;

    // --jobs does not affect artifacts, so it stays out of the provenance line.
    Effective eff("sweep");
    eff.add("config", a.config).add("out", a.out).add("burn-in", cfg.burn_in);
    err << "effective: " << eff.line() << " (jobs " << a.jobs << ")\n";

    const auto result = run_sweep(cfg, a.jobs);
    const fs::path dir(a.out);
    const std::string line = eff.line();
    for (const auto& c : result.configs) {
        const fs::path sub = dir / config_dir_name(c);
        io::write_atomic(sub / "ntnt_mean.csv", emit_ntnt_mean_csv(c, line));
        io::write_atomic(sub / "topples_mean.csv", emit_topples_mean_csv(c, line));
        const auto& net = cfg.networks[c.index / cfg.P_values.size()];
        if (net.roster) {
            std::vector<std::vector<std::uint64_t>> runs;
            for (const auto& r : c.runs) runs.push_back(r.topples);
            io::write_atomic(sub / "grade_boxes.csv", emit_grade_boxes_csv(topples_by_grade(runs, *net.roster), line));
            const auto rows = correlation_table(*net.roster, net.graph, c.topples_mean);
            io::write_atomic(sub / "correlations.csv", emit_correlations_csv(rows, line));
        }
        if (cfg.keep_run_series) {
            std::ostringstream series;
            series << "# " << line << '\n' << "run,seed,grain_index,cumulative_topples\n";
            for (std::size_t r = 0; r < c.runs.size(); ++r) {
                for (std::size_t x = 0; x < c.runs[r].ntnt_series.size(); ++x) {
                    series << r << ',' << c.runs[r].seed << ',' << x << ',' << c.runs[r].ntnt_series[x] << '\n';
                }
            }
            io::write_atomic(sub / "ntnt_runs.csv", series.str());
        }
    }
    io::write_atomic(dir / "sweep_summary.json", emit_sweep_summary_json(cfg, result, cfg.burn_in, line));
    err << result.configs.size() << " configurations, " << result.total_grains << " grains dropped -> " << a.out
        << '\n';
    return 0;
}

struct MetricsArgs {
    std::string graph;
    std::string roster;
    std::string scope = "largest";
    std::string out;
};

int metrics_cmd(const MetricsArgs& a, std::ostream& err) {
    Effective eff("metrics");
    if (!a.graph.empty()) eff.add("graph", a.graph);
    if (!a.roster.empty()) eff.add("roster", a.roster);
    eff.add("scope", a.scope).add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    if (a.graph.empty() && a.roster.empty()) throw ValidationError("metrics needs --graph or --roster");
    std::optional<Roster> roster;
    if (!a.roster.empty()) roster = load_roster(a.roster);
    const Graph g = a.graph.empty() ? build_fan(*roster)
                                    : load_graph_file(a.graph, roster ? std::optional(roster->size()) : std::nullopt);
    EigenvectorOptions opts;
    if (a.scope == "all") {
        opts.scope = ComponentScope::all;
    } else if (a.scope != "largest") {
        throw ValidationError("--scope must be largest or all");
    }

    const fs::path dir(a.out);
    const std::string line = eff.line();
    io::write_atomic(dir / "degree.csv", emit_metric_csv(degree_centrality(g), "node", line));
    io::write_atomic(dir / "eigenvector.csv", emit_metric_csv(eigenvector_centrality(g, opts), "node", line));
    io::write_atomic(dir / "betweenness.csv", emit_metric_csv(betweenness_centrality(g), "node", line));
    if (roster) {
        const auto groups = group_measures(*roster);
        io::write_atomic(dir / "group_measures.csv", emit_group_measures_csv(groups, line));
    }
    err << "metrics for " << g.size() << " nodes -> " << a.out << '\n';
    return 0;
}

struct CorrelateArgs {
    std::string roster;
    std::string graph;
    std::string topples;
    std::string out;
};

int correlate_cmd(const CorrelateArgs& a, std::ostream& out, std::ostream& err) {
    Effective eff("correlate");
    eff.add("roster", a.roster);
    if (!a.graph.empty()) eff.add("graph", a.graph);
    if (!a.topples.empty()) eff.add("topples", a.topples);
    eff.add("out", a.out);
    err << "effective: " << eff.line() << '\n';

    const Roster roster = load_roster(a.roster);
    const Graph g = a.graph.empty() ? build_fan(roster) : load_graph_file(a.graph, roster.size());
    std::vector<double> topples(g.size(), 0.0);
    if (!a.topples.empty()) {
        topples = load_node_values(a.topples, g.size());
    } else {
        err << "warning: no --topples given; the Topples row is undefined\n";
    }
    const auto rows = correlation_table(roster, g, topples);
    io::write_atomic(fs::path(a.out) / "correlations.csv", emit_correlations_csv(rows, eff.line()));
    out << format_correlation_table(rows);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sinkless sandpile simulation and social-network correlation toolkit", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    std::string isa = "auto";
    app.add_option("--isa", isa, "Kernel ISA: auto, scalar or avx2")->capture_default_str();

    GenRosterArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-roster", "Generate a synthetic student roster");
    gen_cmd->add_option("--students", gen.students)->capture_default_str();
    gen_cmd->add_option("--groups", gen.groups)->capture_default_str();
    gen_cmd->add_option("--semesters", gen.semesters)->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed)->required();
    gen_cmd->add_option("--majors", gen.majors, "Comma-separated major pool")->capture_default_str();
    gen_cmd->add_option("--years", gen.years, "Comma-separated year pool")->capture_default_str();
    gen_cmd->add_option("--out", gen.out)->required();

    BuildFanArgs fan;
    auto* fan_cmd = app.add_subcommand("build-fan", "Build the friend approximation network from a roster");
    fan_cmd->add_option("--roster", fan.roster)->required();
    fan_cmd->add_option("--out", fan.out, "Edge list; labels go to <out>.labels.csv")->required();

    GridArgs grid;
    auto* grid_sub = app.add_subcommand("grid", "Write a lattice graph, optionally with a boundary sink");
    grid_sub->add_option("--width", grid.width)->capture_default_str();
    grid_sub->add_option("--height", grid.height)->capture_default_str();
    grid_sub->add_flag("--sink", grid.sink);
    grid_sub->add_option("--out", grid.out)->required();

    CapacitiesArgs cap;
    auto* cap_cmd = app.add_subcommand("capacities", "Distribute K over nodes and check k_i >= deg(i) + g");
    cap_cmd->add_option("--graph", cap.graph)->required();
    cap_cmd->add_option("--nodes", cap.nodes);
    cap_cmd->add_option("--K", cap.K)->capture_default_str();
    cap_cmd->add_option("--P", cap.P)->capture_default_str();
    cap_cmd->add_option("--g", cap.g)->capture_default_str();
    cap_cmd->add_flag("--real-P", cap.real_p, "Allow a non-integer exponent (double precision)");
    cap_cmd->add_option("--out", cap.out, "CSV node,k");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Drop X grains and record topples");
    sim_cmd->add_option("--graph", sim.graph)->required();
    sim_cmd->add_option("--nodes", sim.nodes);
    sim_cmd->add_option("--K", sim.K)->capture_default_str();
    sim_cmd->add_option("--P", sim.P)->capture_default_str();
    sim_cmd->add_option("--g", sim.g, "Dissipation (default 0.1, or 0 in asm_oracle mode)");
    sim_cmd->add_option("--X", sim.X)->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed)->required();
    sim_cmd->add_option("--mode", sim.mode)->check(CLI::IsMember({"sinkless", "asm_oracle"}))->capture_default_str();
    sim_cmd->add_option("--sinks", sim.sinks, "Sink node ids (asm_oracle mode)");
    sim_cmd->add_option("--arith", sim.arith)->check(CLI::IsMember({"exact", "fast"}))->capture_default_str();
    sim_cmd->add_option("--drops", sim.drops, "File of drop node ids replacing the PRNG schedule");
    sim_cmd->add_option("--out", sim.out)->required();

    SweepArgs sw;
    auto* sweep_sub = app.add_subcommand("sweep", "Run a configuration sweep from sweep.json");
    sweep_sub->add_option("--config", sw.config)->required();
    sweep_sub->add_option("--out", sw.out)->required();
    sweep_sub->add_option("--jobs", sw.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    sweep_sub->add_option("--burn-in", sw.burn_in);

    MetricsArgs met;
    auto* met_cmd = app.add_subcommand("metrics", "Degree, eigenvector and betweenness centrality");
    met_cmd->add_option("--graph", met.graph);
    met_cmd->add_option("--roster", met.roster);
    met_cmd->add_option("--scope", met.scope)->check(CLI::IsMember({"largest", "all"}))->capture_default_str();
    met_cmd->add_option("--out", met.out)->required();

    CorrelateArgs cor;
    auto* cor_cmd = app.add_subcommand("correlate", "Pearson table of eight metrics against grades");
    cor_cmd->add_option("--roster", cor.roster)->required();
    cor_cmd->add_option("--graph", cor.graph);
    cor_cmd->add_option("--topples", cor.topples, "CSV node,value of topple counts");
    cor_cmd->add_option("--out", cor.out)->required();

    std::vector<const char*> argv{kToolName};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolName << ' ' << kToolVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        apply_isa(isa);
        if (*gen_cmd) return gen_roster(gen, err);
        if (*fan_cmd) return build_fan_cmd(fan, err);
        if (*grid_sub) return grid_cmd(grid, err);
        if (*cap_cmd) return capacities_cmd(cap, out, err);
        if (*sim_cmd) return simulate_cmd(sim, err);
        if (*sweep_sub) return sweep_cmd(sw, err);
        if (*met_cmd) return metrics_cmd(met, err);
        if (*cor_cmd) return correlate_cmd(cor, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace sandnet::cli
