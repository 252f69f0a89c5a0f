#include "sandnet/engine.hpp"

#include "sandnet/capacity.hpp"
#include "sandnet/error.hpp"
#include "sandnet/io.hpp"
#include "sandnet/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sandnet {

namespace {

constexpr std::int64_t kNoTopple = std::numeric_limits<std::int64_t>::max();

std::vector<std::uint8_t> sink_flags(std::size_t n, std::span<const NodeId> sinks) {
    std::vector<std::uint8_t> flags(n, 0);
    for (NodeId s : sinks) {
        if (s >= n) throw ValidationError("sink id " + std::to_string(s) + " out of range");
        flags[s] = 1;
    }
    return flags;
}

void check_rule_inputs(const Graph& g, std::span<const Rational> k, const Rational& dissipation) {
    if (k.size() != g.size()) {
        throw ValidationError("capacity vector has " + std::to_string(k.size()) + " entries for " +
                              std::to_string(g.size()) + " nodes");
    }
    if (dissipation < 0 || dissipation > 1) throw ValidationError("dissipation g must lie in [0, 1]");
}

std::int64_t to_int64(const BigInt& value, const char* what) {
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
        throw ValidationError(std::string(what) + " does not fit the exact engine's 64-bit sand units");
    }
    return value.convert_to<std::int64_t>();
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

}  // namespace

ToppleRules<std::int64_t> exact_rules(const Graph& g, std::span<const Rational> k, const Rational& dissipation,
                                      std::span<const NodeId> sinks) {
    check_rule_inputs(g, k, dissipation);
    const BigInt p = boost::multiprecision::numerator(dissipation);
    const BigInt q = boost::multiprecision::denominator(dissipation);
    ToppleRules<std::int64_t> rules;
    rules.grain = to_int64(q, "the dissipation denominator");
    rules.dissipation = to_int64(p, "the dissipation numerator");
    rules.sink = sink_flags(g.size(), sinks);
    rules.threshold.resize(g.size());
    rules.loss.resize(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        rules.loss[i] = static_cast<std::int64_t>(g.degree(i)) * rules.grain;
        rules.threshold[i] = rules.sink[i] ? kNoTopple : to_int64(floor(k[i] * Rational(q)), "a node capacity");
    }
    return rules;
}

ToppleRules<double> fast_rules(const Graph& g, std::span<const Rational> k, const Rational& dissipation,
                               std::span<const NodeId> sinks) {
    check_rule_inputs(g, k, dissipation);
    ToppleRules<double> rules;
    rules.grain = 1.0;
    rules.dissipation = to_double(dissipation);
    rules.sink = sink_flags(g.size(), sinks);
    rules.threshold.resize(g.size());
    rules.loss.resize(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        rules.loss[i] = static_cast<double>(g.degree(i));
        if (rules.sink[i]) {
            rules.threshold[i] = std::numeric_limits<double>::infinity();
        } else {
            const double ki = to_double(k[i]);
            rules.threshold[i] = ki + kFastTieTolerance * std::max(1.0, std::abs(ki));
        }
    }
    return rules;
}

template <typename V>
Sandpile<V>::Sandpile(const Graph& g, ToppleRules<V> rules)
    : n_(g.size()), stride_((g.size() + 7) / 8 * 8), adjacency_(n_ * stride_, 0), rules_(std::move(rules)) {
    if (rules_.threshold.size() != n_ || rules_.loss.size() != n_ || rules_.sink.size() != n_) {
        throw ValidationError("topple rules do not match the graph size");
    }
    for (NodeId i = 0; i < n_; ++i) {
        for (NodeId j : g.neighbors(i)) adjacency_[i * stride_ + j] = 1;
    }
    state_.sand.assign(n_, V{});
    state_.topples.assign(n_, 0);
    mask_.assign(n_, 0);
    gain_.assign(n_, 0);
}

template <typename V>
void Sandpile<V>::set_sand(std::span<const V> sand) {
    if (sand.size() != n_) throw ValidationError("sand vector size mismatch");
    state_.sand.assign(sand.begin(), sand.end());
}

namespace {

std::size_t mark_above(std::span<const std::int64_t> s, std::span<const std::int64_t> t, std::span<std::int32_t> m) {
    return kernels::active().mark_above_i64(s, t, m);
}
std::size_t mark_above(std::span<const double> s, std::span<const double> t, std::span<std::int32_t> m) {
    return kernels::active().mark_above_f64(s, t, m);
}

void apply_topples(std::span<std::int64_t> sand, std::span<const std::int32_t> mask, std::span<const std::int32_t> gain,
                   const ToppleRules<std::int64_t>& rules) {
    kernels::active().apply_topples_i64(sand, mask, gain, rules.loss, rules.dissipation, rules.grain);
}
void apply_topples(std::span<double> sand, std::span<const std::int32_t> mask, std::span<const std::int32_t> gain,
                   const ToppleRules<double>& rules) {
    kernels::active().apply_topples_f64(sand, mask, gain, rules.loss, rules.dissipation);
}

}  // namespace

template <typename V>
std::vector<NodeId> Sandpile<V>::topple_set() const {
    std::vector<std::int32_t> mask(n_, 0);
    mark_above(state_.sand, rules_.threshold, mask);
    std::vector<NodeId> out;
    for (NodeId i = 0; i < n_; ++i) {
        if (mask[i] && !rules_.sink[i]) out.push_back(i);
    }
    return out;
}

template <typename V>
std::size_t Sandpile<V>::step() {
    const std::size_t count = mark_above(state_.sand, rules_.threshold, mask_);
    if (count == 0) return 0;
    const auto& k = kernels::active();
    std::fill(gain_.begin(), gain_.end(), 0);
    for (NodeId j = 0; j < n_; ++j) {
        if (!mask_[j]) continue;
        k.accumulate_i32(gain_, std::span<const std::int32_t>(adjacency_).subspan(j * stride_, n_));
        ++state_.topples[j];
    }
    apply_topples(state_.sand, mask_, gain_, rules_);
    for (NodeId j = 0; j < n_; ++j) {
        if (mask_[j] && state_.sand[j] < V{}) {
            throw InvariantError("sand at node " + std::to_string(j) +
                                 " went negative; capacities violate k_i >= deg(i) + g");
        }
    }
    total_topples_ += count;
    ++state_.clock;
    return count;
}

template <typename V>
V Sandpile<V>::total_sand() const {
    return std::accumulate(state_.sand.begin(), state_.sand.end(), V{});
}

template <typename V>
std::uint64_t Sandpile<V>::watchdog_limit() const {
    // Every step topples at least one node, and each topple removes g.
    if (rules_.dissipation > V{}) {
        const double bound = static_cast<double>(total_sand()) / static_cast<double>(rules_.dissipation);
        return static_cast<std::uint64_t>(bound) + 1;
    }
    // g = 0: classic dynamics, where relaxation toward the sinks is polynomial in n
    // per grain. Loose on purpose; only a runaway loop should hit it.
    const auto grains = static_cast<std::uint64_t>(static_cast<double>(total_sand()) / static_cast<double>(rules_.grain));
    const std::uint64_t n = std::max<std::uint64_t>(n_, 2);
    return saturating_mul(saturating_mul(grains + 1, n), saturating_mul(n, n));
}

template <typename V>
CascadeOutcome Sandpile<V>::run_cascade() {
    CascadeOutcome outcome;
    const std::uint64_t limit = watchdog_limit();
    while (true) {
        const std::size_t toppled = step();
        if (toppled == 0) break;
        outcome.topples += toppled;
        if (++outcome.steps > limit) {
            throw InvariantError("cascade exceeded " + std::to_string(limit) + " steps without settling");
        }
    }
    return outcome;
}

template <typename V>
CascadeOutcome Sandpile<V>::drop(NodeId node) {
    if (node >= n_) throw ValidationError("drop target " + std::to_string(node) + " out of range");
    state_.sand[node] += rules_.grain;
    ++state_.drops;
    ++state_.clock;
    CascadeOutcome outcome = run_cascade();
    state_.ntnt_series.push_back(total_topples_);
    return outcome;
}

template class Sandpile<std::int64_t>;
template class Sandpile<double>;

std::vector<NodeId> drop_sequence(std::size_t node_count, std::size_t count, std::uint64_t seed) {
    if (node_count == 0) throw ValidationError("cannot drop grains on an empty graph");
    DropSchedule schedule(node_count, seed);
    std::vector<NodeId> out(count);
    for (auto& v : out) v = schedule.next();
    return out;
}

namespace {

void check_config(const Graph& g, const SimulationConfig& config, SimulationResult& result) {
    if (g.size() == 0) throw ValidationError("graph has no nodes");
    if (config.grains < 1) throw ValidationError("X (grains to drop) must be at least 1");
    if (config.k.size() != g.size()) {
        throw ValidationError("capacity vector has " + std::to_string(config.k.size()) + " entries for " +
                              std::to_string(g.size()) + " nodes");
    }
    if (config.g < 0 || config.g > 1) throw ValidationError("dissipation g must lie in [0, 1]");

    if (config.mode == EngineMode::sinkless) {
        if (!config.sinks.empty()) throw ValidationError("sinkless mode does not accept sinks");
        if (config.g == 0) throw ValidationError("sinkless mode needs g > 0 (g = 0 is only valid in asm_oracle mode)");
        const auto report = validate_capacities(g, config.k, config.g);
        if (!report.ok()) {
            std::ostringstream msg;
            msg << "capacity validation failed (k_i >= deg(i) + g) at node(s):";
            for (NodeId v : report.violations()) msg << ' ' << v;
            throw ValidationError(msg.str());
        }
        const Rational K = std::accumulate(config.k.begin(), config.k.end(), Rational(0));
        if (Rational(config.grains) < 2 * K) {
            result.warnings.push_back("X = " + std::to_string(config.grains) + " is below 2K = " +
                                      format_rational(2 * K) + "; the pile may not reach its critical regime");
        }
    } else {
        if (config.sinks.empty()) throw ValidationError("asm_oracle mode needs at least one sink");
        if (config.g == 0) {
            const auto comp = connected_components(g);
            std::vector<std::uint8_t> drains(g.size(), 0);
            for (NodeId s : config.sinks) {
                if (s >= g.size()) throw ValidationError("sink id " + std::to_string(s) + " out of range");
                drains[comp[s]] = 1;
            }
            for (NodeId i = 0; i < g.size(); ++i) {
                if (!drains[comp[i]]) {
                    throw ValidationError("node " + std::to_string(i) + " cannot reach a sink; cascades may not end");
                }
            }
        }
    }
    if (config.forced_drops) {
        if (config.forced_drops->size() < config.grains) {
            throw ValidationError("drop file lists " + std::to_string(config.forced_drops->size()) +
                                  " drops but X = " + std::to_string(config.grains));
        }
        for (NodeId v : *config.forced_drops) {
            if (v >= g.size()) throw ValidationError("drop target " + std::to_string(v) + " out of range");
        }
    }
}

template <typename V, typename NextDrop>
void run_drops(Sandpile<V>& pile, std::uint64_t grains, NextDrop&& next, SimulationResult& result) {
    for (std::uint64_t x = 0; x < grains; ++x) pile.drop(next(x));
    const auto& s = pile.state();
    result.topples = s.topples;
    result.ntnt_series = s.ntnt_series;
    result.drops = s.drops;
    result.steps = s.clock;
}

}  // namespace

SimulationResult simulate(const Graph& g, const SimulationConfig& config) {
    SimulationResult result;
    check_config(g, config, result);
    result.arithmetic = config.arithmetic;

    DropSchedule schedule(g.size(), config.seed);
    auto next = [&](std::uint64_t x) -> NodeId {
        return config.forced_drops ? (*config.forced_drops)[x] : schedule.next();
    };

    if (config.arithmetic == Arithmetic::exact) {
        auto rules = exact_rules(g, config.k, config.g, config.sinks);
        const double headroom = static_cast<double>(std::numeric_limits<std::int64_t>::max()) / 4;
        if (static_cast<double>(config.grains) * static_cast<double>(rules.grain) > headroom) {
            throw ValidationError("X * denominator(g) overflows the exact engine; use --arith fast");
        }
        const std::int64_t unit = rules.grain;
        ExactSandpile pile(g, std::move(rules));
        run_drops(pile, config.grains, next, result);
        for (std::int64_t units : pile.state().sand) {
            result.sand_exact.emplace_back(BigInt(units), BigInt(unit));
            result.sand.push_back(to_double(result.sand_exact.back()));
        }
    } else {
        FastSandpile pile(g, fast_rules(g, config.k, config.g, config.sinks));
        run_drops(pile, config.grains, next, result);
        result.sand = pile.state().sand;
    }
    return result;
}

std::vector<Rational> classic_asm_thresholds(const Graph& g) {
    std::vector<Rational> k;
    k.reserve(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        k.emplace_back(static_cast<long long>(g.degree(i)) - 1);
    }
    return k;
}

SimulationResult simulate_asm_oracle(const Graph& g, std::span<const NodeId> sinks, std::span<const Rational> k,
                                     std::span<const NodeId> drops) {
    const std::size_t n = g.size();
    if (sinks.empty()) throw ValidationError("the classic sandpile needs a sink");
    if (k.size() != n) throw ValidationError("capacity vector size mismatch");
    const auto is_sink = sink_flags(n, sinks);

    std::vector<std::int64_t> limit(n, kNoTopple);
    for (NodeId i = 0; i < n; ++i) {
        if (!is_sink[i]) limit[i] = to_int64(floor(k[i]), "a node capacity");
    }

    SimulationResult result;
    result.arithmetic = Arithmetic::exact;
    std::vector<std::int64_t> z(n, 0);
    result.topples.assign(n, 0);
    std::uint64_t total = 0;
    std::vector<NodeId> unstable;
    for (NodeId site : drops) {
        if (site >= n) throw ValidationError("drop target " + std::to_string(site) + " out of range");
        ++z[site];
        ++result.drops;
        unstable.push_back(site);
        while (!unstable.empty()) {
            const NodeId v = unstable.back();
            unstable.pop_back();
            if (z[v] <= limit[v]) continue;
            z[v] -= static_cast<std::int64_t>(g.degree(v));
            ++result.topples[v];
            ++total;
            ++result.steps;
            for (NodeId w : g.neighbors(v)) {
                if (++z[w] > limit[w]) unstable.push_back(w);
            }
            if (z[v] > limit[v]) unstable.push_back(v);
        }
        result.ntnt_series.push_back(total);
    }
    for (std::int64_t grains : z) {
        result.sand_exact.emplace_back(grains);
        result.sand.push_back(static_cast<double>(grains));
    }
    return result;
}

Rational conservation_residual_exact(const SimulationResult& result, const Rational& g) {
    if (result.sand_exact.size() != result.sand.size()) {
        throw ValidationError("exact residual needs an exact-mode result");
    }
    Rational sum = std::accumulate(result.sand_exact.begin(), result.sand_exact.end(), Rational(0));
    const std::uint64_t topples = std::accumulate(result.topples.begin(), result.topples.end(), std::uint64_t{0});
    return sum - (Rational(result.drops) - g * Rational(topples));
}

double conservation_residual(const SimulationResult& result, const Rational& g) {
    double sum = 0.0;
    for (double s : result.sand) sum += s;
    const std::uint64_t topples = std::accumulate(result.topples.begin(), result.topples.end(), std::uint64_t{0});
    return sum - (static_cast<double>(result.drops) - to_double(g) * static_cast<double>(topples));
}

namespace {

void put_comment(std::ostringstream& out, std::string_view comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
}

}  // namespace

std::string emit_ntnt_csv(const SimulationResult& result, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "grain_index,cumulative_topples\n";
    for (std::size_t x = 0; x < result.ntnt_series.size(); ++x) out << x << ',' << result.ntnt_series[x] << '\n';
    return out.str();
}

std::string emit_topples_csv(const SimulationResult& result, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "node,count\n";
    for (std::size_t i = 0; i < result.topples.size(); ++i) out << i << ',' << result.topples[i] << '\n';
    return out.str();
}

std::string emit_final_state_csv(const SimulationResult& result, std::string_view comment) {
    std::ostringstream out;
    put_comment(out, comment);
    out << "node,sand\n";
    const bool exact = result.sand_exact.size() == result.sand.size();
    for (std::size_t i = 0; i < result.sand.size(); ++i) {
        out << i << ',' << (exact ? format_rational(result.sand_exact[i]) : io::format_double(result.sand[i])) << '\n';
    }
    return out.str();
}

std::vector<NodeId> parse_drop_file(std::string_view text, std::size_t node_count) {
    std::vector<NodeId> drops;
    std::size_t line_no = 0;
    for (std::string_view line : io::lines(text)) {
        ++line_no;
        line = io::trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',') ++i;
            if (i == start) continue;
            NodeId v = 0;
            const auto tok = line.substr(start, i - start);
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw ParseError(line_no, "bad node id '" + std::string(tok) + "'");
            }
            if (v >= node_count) throw ParseError(line_no, "node id " + std::to_string(v) + " out of range");
            drops.push_back(v);
        }
    }
    return drops;
}

}  // namespace sandnet
