#include "sandnet/experiments.hpp"

#include "sandnet/capacity.hpp"
#include "sandnet/error.hpp"
#include "sandnet/io.hpp"
#include "sandnet/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace sandnet {

namespace {

using Wide = unsigned __int128;

// Exact per-index sums; the reduction does not depend on the order runs finish in.
struct Accumulator {
    std::vector<std::uint64_t> sum;
    std::vector<Wide> sum_sq;

    explicit Accumulator(std::size_t n) : sum(n, 0), sum_sq(n, 0) {}

    void add(std::span<const std::uint64_t> values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum[i] += values[i];
            sum_sq[i] += static_cast<Wide>(values[i]) * values[i];
        }
    }

    void finish(std::size_t runs, std::vector<double>& mean, std::vector<double>& sd) const {
        const auto r = static_cast<double>(runs);
        mean.resize(sum.size());
        sd.assign(sum.size(), 0.0);
        for (std::size_t i = 0; i < sum.size(); ++i) {
            mean[i] = static_cast<double>(sum[i]) / r;
            if (runs > 1) {
                // n * sum(x^2) - (sum x)^2 is exact and non-negative.
                const Wide spread = static_cast<Wide>(runs) * sum_sq[i] - static_cast<Wide>(sum[i]) * sum[i];
                sd[i] = std::sqrt(static_cast<double>(spread) / (r * (r - 1.0)));
            }
        }
    }
};

struct PreparedConfig {
    std::size_t network = 0;
    int P = 0;
    std::vector<Rational> k;
};

}  // namespace

SweepResult run_sweep(const SweepConfig& config, std::size_t jobs) {
    if (config.networks.empty()) throw ValidationError("sweep has no networks");
    if (config.P_values.empty()) throw ValidationError("sweep has no P values");
    if (config.runs < 1) throw ValidationError("sweep needs at least one run per configuration");
    if (config.grains < 1) throw ValidationError("X must be at least 1");
    if (!(config.g > 0 && config.g <= 1)) throw ValidationError("g must lie in (0, 1]");

    std::vector<PreparedConfig> prepared;
    std::ostringstream failures;
    for (std::size_t net = 0; net < config.networks.size(); ++net) {
        for (int P : config.P_values) {
            const auto& network = config.networks[net];
            PreparedConfig pc{net, P, {}};
            try {
                pc.k = capacities(network.graph, config.K, P);
                const auto report = validate_capacities(network.graph, pc.k, config.g);
                if (!report.ok()) {
                    failures << "\n  " << network.label << " P=" << P << ": k_i < deg(i) + g at node(s)";
                    for (NodeId v : report.violations()) failures << ' ' << v;
                }
            } catch (const ValidationError& e) {
                failures << "\n  " << network.label << " P=" << P << ": " << e.what();
            }
            prepared.push_back(std::move(pc));
        }
    }
    if (!failures.str().empty()) throw ValidationError("sweep rejected before any run:" + failures.str());

    SweepResult result;
    result.configs.resize(prepared.size());
    std::vector<Accumulator> ntnt_acc;
    std::vector<Accumulator> topple_acc;
    std::vector<std::mutex> locks(prepared.size());
    for (std::size_t c = 0; c < prepared.size(); ++c) {
        auto& cr = result.configs[c];
        cr.index = c;
        cr.network = config.networks[prepared[c].network].label;
        cr.P = prepared[c].P;
        cr.runs.resize(config.runs);
        ntnt_acc.emplace_back(config.grains);
        topple_acc.emplace_back(config.networks[prepared[c].network].graph.size());
    }

    const std::size_t total_tasks = prepared.size() * config.runs;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto worker = [&] {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total_tasks) return;
            const std::size_t c = task / config.runs;
            const std::size_t run = task % config.runs;
            try {
                const auto& pc = prepared[c];
                SimulationConfig sim;
                sim.k = pc.k;
                sim.g = config.g;
                sim.grains = config.grains;
                sim.seed = derive_seed(config.base_seed, c, run);
                sim.arithmetic = config.arithmetic;
                auto out = simulate(config.networks[pc.network].graph, sim);

                RunRecord rec;
                rec.seed = sim.seed;
                rec.total_topples = out.total_topples();
                rec.topples = std::move(out.topples);
                {
                    std::lock_guard lock(locks[c]);
                    ntnt_acc[c].add(out.ntnt_series);
                    topple_acc[c].add(rec.topples);
                }
                if (config.keep_run_series) rec.ntnt_series = std::move(out.ntnt_series);
                result.configs[c].runs[run] = std::move(rec);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next.store(total_tasks);
                return;
            }
        }
    };

    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, total_tasks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t c = 0; c < prepared.size(); ++c) {
        auto& cr = result.configs[c];
        ntnt_acc[c].finish(config.runs, cr.ntnt_mean, cr.ntnt_sd);
        topple_acc[c].finish(config.runs, cr.topples_mean, cr.topples_sd);
        cr.grains_dropped = config.grains * config.runs;
        for (const auto& run : cr.runs) cr.total_topples += run.total_topples;
        result.total_grains += cr.grains_dropped;
    }
    return result;
}

TailFit ntnt_tail_fit(std::span<const double> series, std::size_t burn_in) {
    if (burn_in >= series.size() || series.size() - burn_in < 2) {
        throw ValidationError("tail fit needs at least two points at or after burn-in " + std::to_string(burn_in) +
                              " (series length " + std::to_string(series.size()) + ")");
    }
    const auto tail = series.subspan(burn_in);
    TailFit fit;
    fit.points = tail.size();
    const auto n = static_cast<double>(tail.size());

    if (std::all_of(tail.begin(), tail.end(), [&](double y) { return y == tail.front(); })) {
        fit.slope = 0.0;
        fit.intercept = tail.front();
        return fit;
    }

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        mx += static_cast<double>(burn_in + i);
        my += tail[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double dx = static_cast<double>(burn_in + i) - mx;
        const double dy = tail[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (sxy * sxy) / (sxx * syy);
    return fit;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<GradeBucket> topples_by_grade(std::span<const std::vector<std::uint64_t>> run_topples,
                                          const Roster& roster, const GradeBands& bands) {
    constexpr LetterGrade kLetters[] = {LetterGrade::A, LetterGrade::B, LetterGrade::C, LetterGrade::D_or_below};
    std::vector<std::vector<double>> samples(4);
    std::vector<std::size_t> nodes(4, 0);
    for (std::size_t i = 0; i < roster.size(); ++i) {
        const auto bucket = static_cast<std::size_t>(letter_grade(roster[i].grade, bands));
        ++nodes[bucket];
        for (const auto& run : run_topples) {
            if (run.size() != roster.size()) {
                throw ValidationError("topple vector covers " + std::to_string(run.size()) + " nodes, roster has " +
                                      std::to_string(roster.size()));
            }
            samples[bucket].push_back(static_cast<double>(run[i]));
        }
    }

    std::vector<GradeBucket> out;
    for (std::size_t b = 0; b < 4; ++b) {
        GradeBucket bucket;
        bucket.letter = kLetters[b];
        bucket.nodes = nodes[b];
        auto& s = samples[b];
        bucket.samples = s.size();
        if (!s.empty()) {
            std::sort(s.begin(), s.end());
            double sum = 0.0;
            for (double v : s) sum += v;
            bucket.mean = sum / static_cast<double>(s.size());
            if (s.size() > 1) {
                double ss = 0.0;
                for (double v : s) ss += (v - bucket.mean) * (v - bucket.mean);
                bucket.sd = std::sqrt(ss / static_cast<double>(s.size() - 1));
            }
            bucket.min = s.front();
            bucket.q1 = quantile(s, 0.25);
            bucket.median = quantile(s, 0.5);
            bucket.q3 = quantile(s, 0.75);
            bucket.max = s.back();
        }
        out.push_back(bucket);
    }
    return out;
}

namespace {

CorrelationRow correlate(std::string metric, CorrelationLevel level, std::span<const double> xs,
                         std::span<const double> ys) {
    CorrelationRow row{std::move(metric), level, std::nullopt, xs.size()};
    if (xs.size() >= 2) row.rho = try_pearson(xs, ys);
    return row;
}

}  // namespace

std::vector<CorrelationRow> correlation_table(const Roster& roster, const Graph& graph,
                                              std::span<const double> topples_per_node) {
    if (roster.size() != graph.size() || topples_per_node.size() != graph.size()) {
        throw ValidationError("roster, graph and topple vector must cover the same nodes");
    }
    std::vector<double> grades;
    grades.reserve(roster.size());
    for (const auto& r : roster.records()) grades.push_back(r.grade);

    std::vector<CorrelationRow> rows;
    rows.push_back(correlate("Topples", CorrelationLevel::member, topples_per_node, grades));
    const auto eigen = eigenvector_centrality(graph, {.scope = ComponentScope::all});
    rows.push_back(correlate("Eigenvector", CorrelationLevel::member, eigen.values, grades));
    rows.push_back(correlate("Degree", CorrelationLevel::member, degree_centrality(graph).values, grades));
    rows.push_back(correlate("Betweenness", CorrelationLevel::member, betweenness_centrality(graph).values, grades));

    const auto groups = group_measures(roster);
    std::vector<double> inter, inter_grade, year, gender, size, group_grade;
    for (const auto& m : groups) {
        if (m.avg_intergrade) {
            inter.push_back(*m.avg_intergrade);
            inter_grade.push_back(m.avg_grade);
        }
        year.push_back(m.avg_year);
        gender.push_back(m.gender_ratio);
        size.push_back(static_cast<double>(m.size));
        group_grade.push_back(m.avg_grade);
    }
    rows.push_back(correlate("AvgIntergrade", CorrelationLevel::group, inter, inter_grade));
    rows.push_back(correlate("AvgYear", CorrelationLevel::group, year, group_grade));
    rows.push_back(correlate("Gender", CorrelationLevel::group, gender, group_grade));
    rows.push_back(correlate("Size", CorrelationLevel::group, size, group_grade));
    return rows;
}

namespace {

std::string_view level_name(CorrelationLevel level) {
    return level == CorrelationLevel::member ? "member" : "group";
}

void put_comment(std::ostringstream& out, std::string_view comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
}

}  // namespace

std::string emit_correlations_csv(std::span<const CorrelationRow> rows, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "metric,level,rho\n";
    for (const auto& row : rows) {
        out << row.metric << ',' << level_name(row.level) << ','
            << (row.rho ? io::format_double(*row.rho) : std::string("undefined")) << '\n';
    }
    return out.str();
}

std::string format_correlation_table(std::span<const CorrelationRow> rows) {
    std::vector<const CorrelationRow*> member, group;
    for (const auto& row : rows) (row.level == CorrelationLevel::member ? member : group).push_back(&row);
    auto cell = [](const CorrelationRow* row) {
        std::ostringstream c;
        if (!row) return std::string(26, ' ');
        c << std::left << std::setw(15) << row->metric << std::right << std::setw(11);
        if (row->rho) {
            std::ostringstream v;
            v << std::showpos << std::fixed << std::setprecision(4) << *row->rho;
            c << v.str();
        } else {
            c << "undefined";
        }
        return c.str();
    };
    std::ostringstream out;
    out << std::left << std::setw(26) << "Member-level" << "    " << "Group-level" << '\n';
    out << std::left << std::setw(15) << "Metric" << std::right << std::setw(11) << "rho" << "    " << std::left
        << std::setw(15) << "Metric" << std::right << std::setw(11) << "rho" << '\n';
    for (std::size_t i = 0; i < std::max(member.size(), group.size()); ++i) {
        out << cell(i < member.size() ? member[i] : nullptr) << "    "
            << cell(i < group.size() ? group[i] : nullptr) << '\n';
    }
    return out.str();
}

std::string emit_grade_boxes_csv(std::span<const GradeBucket> buckets, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "letter,nodes,samples,mean,sd,min,q1,median,q3,max\n";
    for (const auto& b : buckets) {
        out << to_string(b.letter) << ',' << b.nodes << ',' << b.samples << ',' << io::format_double(b.mean) << ','
            << io::format_double(b.sd) << ',' << io::format_double(b.min) << ',' << io::format_double(b.q1) << ','
            << io::format_double(b.median) << ',' << io::format_double(b.q3) << ',' << io::format_double(b.max)
            << '\n';
    }
    return out.str();
}

std::string emit_ntnt_mean_csv(const ConfigResult& config, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "grain_index,mean,sd\n";
    for (std::size_t x = 0; x < config.ntnt_mean.size(); ++x) {
        out << x << ',' << io::format_double(config.ntnt_mean[x]) << ',' << io::format_double(config.ntnt_sd[x])
            << '\n';
    }
    return out.str();
}

std::string emit_topples_mean_csv(const ConfigResult& config, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "node,mean,sd\n";
    for (std::size_t i = 0; i < config.topples_mean.size(); ++i) {
        out << i << ',' << io::format_double(config.topples_mean[i]) << ','
            << io::format_double(config.topples_sd[i]) << '\n';
    }
    return out.str();
}

Graph load_graph_file(const std::filesystem::path& path, std::optional<std::size_t> node_count) {
    const std::string text = io::read_file(path);
    Graph g = load_graph(text, node_count.value_or(infer_node_count(text)));
    auto sidecar = path;
    sidecar.replace_extension(".labels.csv");
    if (std::filesystem::exists(sidecar)) g.set_labels(parse_label_map(io::read_file(sidecar)));
    return g;
}

namespace {

using json = nlohmann::ordered_json;

Rational json_rational(const json& value, const char* key) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number()) return parse_rational(value.dump());
    throw ValidationError(std::string("sweep.json: '") + key + "' must be a number or a numeric string");
}

}  // namespace

SweepConfig parse_sweep_json(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("sweep.json: ") + e.what());
    }
    auto require = [&](const char* key) -> const json& {
        if (!doc.contains(key)) throw ValidationError(std::string("sweep.json: missing '") + key + "'");
        return doc.at(key);
    };
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    SweepConfig cfg;
    try {
        for (const auto& net : require("networks")) {
            Network network;
            network.label = net.at("label").get<std::string>();
            if (net.contains("roster")) network.roster = parse_roster(io::read_file(resolve(net.at("roster"))));
            if (net.contains("graph")) {
                std::optional<std::size_t> n;
                if (network.roster) n = network.roster->size();
                network.graph = load_graph_file(resolve(net.at("graph")), n);
            } else if (network.roster) {
                network.graph = build_fan(*network.roster);
            } else {
                throw ValidationError("sweep.json: network '" + network.label + "' needs a graph or a roster");
            }
            if (network.roster && network.roster->size() != network.graph.size()) {
                throw ValidationError("sweep.json: network '" + network.label + "' roster and graph sizes differ");
            }
            cfg.networks.push_back(std::move(network));
        }
        cfg.P_values = require("P").get<std::vector<int>>();
        cfg.K = json_rational(require("K"), "K");
        cfg.g = json_rational(require("g"), "g");
        cfg.grains = require("X").get<std::uint64_t>();
        cfg.runs = require("runs").get<std::size_t>();
        cfg.base_seed = require("base_seed").get<std::uint64_t>();
        if (doc.contains("arithmetic")) {
            const auto mode = doc.at("arithmetic").get<std::string>();
            if (mode == "exact") {
                cfg.arithmetic = Arithmetic::exact;
            } else if (mode == "fast") {
                cfg.arithmetic = Arithmetic::fast;
            } else {
                throw ValidationError("sweep.json: arithmetic must be 'exact' or 'fast'");
            }
        }
        if (doc.contains("burn_in")) cfg.burn_in = doc.at("burn_in").get<std::size_t>();
        if (doc.contains("keep_run_series")) cfg.keep_run_series = doc.at("keep_run_series").get<bool>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("sweep.json: ") + e.what());
    }
    return cfg;
}

std::string emit_sweep_summary_json(const SweepConfig& config, const SweepResult& result, std::size_t burn_in,
                                    std::string_view generator) {
    json doc;
    doc["generator"] = generator;
    doc["K"] = format_rational(config.K);
    doc["g"] = format_rational(config.g);
    doc["X"] = config.grains;
    doc["runs"] = config.runs;
    doc["base_seed"] = config.base_seed;
    doc["seed_derivation"] = "mix64(mix64(base_seed + GOLDEN*(config+1)) + GOLDEN*(run+1))";
    doc["arithmetic"] = config.arithmetic == Arithmetic::exact ? "exact" : "fast";
    doc["burn_in"] = burn_in;
    doc["total_grains"] = result.total_grains;
    json configs = json::array();
    for (const auto& cr : result.configs) {
        json c;
        c["index"] = cr.index;
        c["network"] = cr.network;
        c["P"] = cr.P;
        c["grains_dropped"] = cr.grains_dropped;
        c["total_topples"] = cr.total_topples;
        c["mean_topples_per_run"] = static_cast<double>(cr.total_topples) / static_cast<double>(cr.runs.size());
        if (burn_in + 2 <= cr.ntnt_mean.size()) {
            const auto fit = ntnt_tail_fit(cr.ntnt_mean, burn_in);
            c["tail_fit"] = {{"slope", fit.slope},
                             {"intercept", fit.intercept},
                             {"r_squared", fit.r_squared ? json(*fit.r_squared) : json(nullptr)},
                             {"points", fit.points}};
        } else {
            c["tail_fit"] = nullptr;
        }
        configs.push_back(std::move(c));
    }
    doc["configs"] = std::move(configs);
    return doc.dump(2) + "\n";
}

}  // namespace sandnet
