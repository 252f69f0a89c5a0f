#pragma once

#include "sandnet/graph.hpp"
#include "sandnet/rational.hpp"
#include "sandnet/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sandnet {

enum class Arithmetic { exact, fast };
enum class EngineMode { sinkless, asm_oracle };

/// Numeric form of (graph, k, g, sinks) that the cascade loop runs on.
///
/// Exact rules count sand in units of 1/q where g = p/q in lowest terms, so every
/// reachable sand amount is an integer number of units. A node with k_i topples
/// when units > floor(k_i * q), which is the same test as S > k_i on exact values.
///
/// Fast rules use doubles. The threshold is k_i plus a tie tolerance of
/// 1e-9 * max(1, k_i), so accumulated rounding on a lattice value that equals k_i
/// does not trigger a topple the exact engine would not perform.
template <typename V>
struct ToppleRules {
    std::vector<V> threshold;      // topple iff sand > threshold; sinks hold the numeric maximum
    std::vector<V> loss;           // deg(i) grains
    V dissipation{};               // g
    V grain{};                     // one grain
    std::vector<std::uint8_t> sink;
};

ToppleRules<std::int64_t> exact_rules(const Graph& g, std::span<const Rational> k, const Rational& dissipation,
                                      std::span<const NodeId> sinks = {});
ToppleRules<double> fast_rules(const Graph& g, std::span<const Rational> k, const Rational& dissipation,
                               std::span<const NodeId> sinks = {});

inline constexpr double kFastTieTolerance = 1e-9;

struct CascadeOutcome {
    std::uint64_t topples = 0;
    std::uint64_t steps = 0;
};

template <typename V>
struct SandpileState {
    std::vector<V> sand;
    std::vector<std::uint64_t> topples;
    std::uint64_t drops = 0;
    std::vector<std::uint64_t> ntnt_series;  // entry x: cumulative topples once grain x settled
    std::uint64_t clock = 0;                 // one tick per drop and per synchronous step
};

/// Sinkless sandpile on a fixed graph. Drops happen only on settled states; a
/// cascade is a run of synchronous steps in which every node above its threshold
/// loses g and then deg(i), and every neighbour of a toppler gains one grain per
/// toppling neighbour.
template <typename V>
class Sandpile {
public:
    Sandpile(const Graph& g, ToppleRules<V> rules);

    const SandpileState<V>& state() const noexcept { return state_; }
    const ToppleRules<V>& rules() const noexcept { return rules_; }

    /// Overwrites the sand vector. Test hook for starting from a prepared state.
    void set_sand(std::span<const V> sand);

    /// Nodes with sand strictly above threshold, ascending. Never contains a sink.
    std::vector<NodeId> topple_set() const;

    /// One synchronous update; returns the number of nodes that toppled. A no-op
    /// when the topple set is empty. Throws InvariantError if a toppler goes negative.
    std::size_t step();

    /// Steps until the topple set is empty. Throws InvariantError if the step
    /// count exceeds the dissipation bound.
    CascadeOutcome run_cascade();

    /// Adds one grain at `node`, runs the cascade to completion and records the
    /// cumulative topple total.
    CascadeOutcome drop(NodeId node);

    V total_sand() const;
    std::uint64_t total_topples() const noexcept { return total_topples_; }

private:
    std::uint64_t watchdog_limit() const;

    std::size_t n_;
    std::size_t stride_;
    std::vector<std::int32_t> adjacency_;  // n rows of `stride_` 0/1 entries
    ToppleRules<V> rules_;
    SandpileState<V> state_;
    std::uint64_t total_topples_ = 0;
    std::vector<std::int32_t> mask_;
    std::vector<std::int32_t> gain_;
};

extern template class Sandpile<std::int64_t>;
extern template class Sandpile<double>;

using ExactSandpile = Sandpile<std::int64_t>;
using FastSandpile = Sandpile<double>;

/// Uniform random drop locations from a seeded SplitMix64 stream.
class DropSchedule {
public:
    DropSchedule(std::size_t node_count, std::uint64_t seed) : n_(node_count), rng_(seed) {}
    NodeId next() { return static_cast<NodeId>(rng_.below(n_)); }

private:
    std::size_t n_;
    SplitMix64 rng_;
};

std::vector<NodeId> drop_sequence(std::size_t node_count, std::size_t count, std::uint64_t seed);

struct SimulationConfig {
    std::vector<Rational> k;  // per node; entries for sinks are ignored
    Rational g;
    std::uint64_t grains = 0;  // X
    std::uint64_t seed = 0;
    EngineMode mode = EngineMode::sinkless;
    std::vector<NodeId> sinks;
    Arithmetic arithmetic = Arithmetic::exact;
    std::optional<std::vector<NodeId>> forced_drops;  // replaces the PRNG schedule
};

struct SimulationResult {
    Arithmetic arithmetic = Arithmetic::exact;
    std::vector<double> sand;
    std::vector<Rational> sand_exact;  // exact mode only
    std::vector<std::uint64_t> topples;
    std::vector<std::uint64_t> ntnt_series;
    std::uint64_t drops = 0;
    std::uint64_t steps = 0;
    std::vector<std::string> warnings;

    std::uint64_t total_topples() const noexcept { return ntnt_series.empty() ? 0 : ntnt_series.back(); }
};

/// Checks the config (capacity feasibility in sinkless mode, a sink set in ASM
/// mode) and drops `grains` grains, each cascade running to completion,
/// including the last one.
SimulationResult simulate(const Graph& g, const SimulationConfig& config);

/// Classic thresholds deg(i) - 1, i.e. a node topples once it holds deg(i) grains.
std::vector<Rational> classic_asm_thresholds(const Graph& g);

/// Classic abelian sandpile with integer grains and infinite-capacity sinks,
/// relaxed one site at a time from a work stack. Separate from the synchronous
/// engine; by the abelian property the two must agree grain for grain.
SimulationResult simulate_asm_oracle(const Graph& g, std::span<const NodeId> sinks, std::span<const Rational> k,
                                     std::span<const NodeId> drops);

/// sum(S) - (drops - g * topples); zero when sand is conserved.
double conservation_residual(const SimulationResult& result, const Rational& g);
Rational conservation_residual_exact(const SimulationResult& result, const Rational& g);

/// The CSV artifacts. Each starts with `comment` (prefixed with "# ") when non-empty.
std::string emit_ntnt_csv(const SimulationResult& result, std::string_view comment = {});
std::string emit_topples_csv(const SimulationResult& result, std::string_view comment = {});
std::string emit_final_state_csv(const SimulationResult& result, std::string_view comment = {});

/// Reads a whitespace- or newline-separated node sequence; '#' lines ignored.
std::vector<NodeId> parse_drop_file(std::string_view text, std::size_t node_count);

}  // namespace sandnet
