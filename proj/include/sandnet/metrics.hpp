#pragma once

#include "sandnet/error.hpp"
#include "sandnet/graph.hpp"
#include "sandnet/rational.hpp"
#include "sandnet/roster.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sandnet {

struct MetricVector {
    std::string name;
    std::vector<double> values;
};

MetricVector degree_centrality(const Graph& g);

enum class ComponentScope {
    largest,  // scores on the largest component (lowest node id breaks ties), zero elsewhere
    all,      // every non-trivial component scored and normalised on its own
};

struct EigenvectorOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 100000;
    ComponentScope scope = ComponentScope::largest;
};

class ConvergenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Principal eigenvector of the adjacency matrix, per connected component, by
/// power iteration on A + I (the shift keeps bipartite components from
/// oscillating without changing eigenvectors). Unit Euclidean norm per scored
/// component, entries >= 0; singleton components score 0.
MetricVector eigenvector_centrality(const Graph& g, const EigenvectorOptions& options = {});

/// Brandes accumulation over unordered pairs: sum over s != v != t of
/// sigma_st(v) / sigma_st, each pair counted once. Disconnected pairs add 0.
MetricVector betweenness_centrality(const Graph& g);
std::vector<Rational> betweenness_centrality_exact(const Graph& g);

struct GroupMeasure {
    std::string group;
    std::size_t size = 0;
    std::optional<double> avg_intergrade;  // absent unless every member has an intergrade
    double avg_year = 0.0;
    double gender_ratio = 0.0;  // fraction of members coded F
    double avg_grade = 0.0;
};

/// One entry per group, in order of first appearance in the roster.
std::vector<GroupMeasure> group_measures(const Roster& roster);

class StatisticsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Pearson's r. Throws StatisticsError on length mismatch, fewer than two
/// points, or a constant input.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// As `pearson`, but nullopt instead of throwing when r is undefined because an
/// input is constant. Length errors still throw.
std::optional<double> try_pearson(std::span<const double> xs, std::span<const double> ys);

std::string emit_metric_csv(const MetricVector& metric, std::string_view key_column, std::string_view comment = {});
std::string emit_group_measures_csv(std::span<const GroupMeasure> groups, std::string_view comment = {});

}  // namespace sandnet
