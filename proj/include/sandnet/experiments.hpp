#pragma once

#include "sandnet/engine.hpp"
#include "sandnet/graph.hpp"
#include "sandnet/rational.hpp"
#include "sandnet/roster.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sandnet {

struct Network {
    std::string label;
    Graph graph;
    std::optional<Roster> roster;
};

struct SweepConfig {
    std::vector<Network> networks;
    std::vector<int> P_values;
    Rational K;
    Rational g;
    std::uint64_t grains = 0;  // X per run
    std::size_t runs = 1;
    std::uint64_t base_seed = 0;
    Arithmetic arithmetic = Arithmetic::exact;
    bool keep_run_series = false;
    std::size_t burn_in = 2300;  // for the summary's tail fit
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> topples;      // per node
    std::vector<std::uint64_t> ntnt_series;  // only with keep_run_series
    std::uint64_t total_topples = 0;
};

/// Configuration i is network (i / |P|) with exponent P[i % |P|].
struct ConfigResult {
    std::size_t index = 0;
    std::string network;
    int P = 0;
    std::vector<RunRecord> runs;  // ordered by run index
    std::vector<double> ntnt_mean;
    std::vector<double> ntnt_sd;
    std::vector<double> topples_mean;  // per node, across runs
    std::vector<double> topples_sd;
    std::uint64_t grains_dropped = 0;
    std::uint64_t total_topples = 0;
};

struct SweepResult {
    std::vector<ConfigResult> configs;
    std::uint64_t total_grains = 0;
};

/// Validates every (network, P) pair up front, then runs all simulations on
/// `jobs` threads. Run j of configuration i is seeded with
/// derive_seed(base_seed, i, j); results are reduced in (config, run) order, so
/// the output does not depend on `jobs`.
SweepResult run_sweep(const SweepConfig& config, std::size_t jobs = 1);

struct TailFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<double> r_squared;  // nullopt when the tail has zero variance
    std::size_t points = 0;

    bool degenerate() const noexcept { return !r_squared.has_value(); }
};

/// Least squares of series[x] against x over x >= burn_in.
TailFit ntnt_tail_fit(std::span<const double> mean_series, std::size_t burn_in);

inline constexpr std::size_t kDefaultBurnIn = 2300;

struct GradeBucket {
    LetterGrade letter = LetterGrade::A;
    std::size_t nodes = 0;
    std::size_t samples = 0;  // nodes * runs
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 with fewer than two samples
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Pools every (run, node) topple count by the node's letter grade. Always
/// returns four buckets A, B, C, D_or_below; empty buckets have zero counts.
std::vector<GradeBucket> topples_by_grade(std::span<const std::vector<std::uint64_t>> run_topples,
                                          const Roster& roster, const GradeBands& bands = {});

enum class CorrelationLevel { member, group };

struct CorrelationRow {
    std::string metric;
    CorrelationLevel level = CorrelationLevel::member;
    std::optional<double> rho;  // nullopt: undefined (constant input)
    std::size_t points = 0;
};

/// Topples, Eigenvector, Degree, Betweenness against member grades, then
/// AvgIntergrade, AvgYear, Gender, Size against group mean grades. Eigenvector
/// scores use every component. Groups missing an intergrade are left out of the
/// AvgIntergrade row.
std::vector<CorrelationRow> correlation_table(const Roster& roster, const Graph& graph,
                                              std::span<const double> topples_per_node);

std::string emit_correlations_csv(std::span<const CorrelationRow> rows, std::string_view comment = {});
std::string emit_grade_boxes_csv(std::span<const GradeBucket> buckets, std::string_view comment = {});
std::string emit_ntnt_mean_csv(const ConfigResult& config, std::string_view comment = {});
std::string emit_topples_mean_csv(const ConfigResult& config, std::string_view comment = {});

/// Two-column Member-level / Group-level table for terminals.
std::string format_correlation_table(std::span<const CorrelationRow> rows);

/// Reads sweep.json. Relative graph and roster paths resolve against `base_dir`.
SweepConfig parse_sweep_json(std::string_view text, const std::filesystem::path& base_dir);

/// sweep_summary.json body. `generator` is recorded as the first field.
std::string emit_sweep_summary_json(const SweepConfig& config, const SweepResult& result,
                                    std::size_t burn_in, std::string_view generator);

/// Loads a graph file plus its "<file>.labels.csv" sidecar when present.
Graph load_graph_file(const std::filesystem::path& path, std::optional<std::size_t> node_count = std::nullopt);

}  // namespace sandnet
