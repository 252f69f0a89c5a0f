#pragma once

#include "sandnet/graph.hpp"
#include "sandnet/rational.hpp"

#include <span>
#include <vector>

namespace sandnet {

/// k_i = K * deg(i)^P / sum_j deg(j)^P, exactly. Throws ValidationError on an
/// isolated node or K <= 0.
std::vector<Rational> capacities(const Graph& g, const Rational& K, int P);

/// Same rule with a real exponent, evaluated in double precision.
std::vector<double> capacities_real(const Graph& g, double K, double P);

/// The printed lower bound on K:
///   (min deg + g) * sum_j deg(j)^P / (min deg if P >= 0, else max deg).
/// Advisory only; `validate_capacities` is the actual feasibility test.
Rational paper_min_K(const Graph& g, int P, const Rational& dissipation);

/// Smallest K at which every node gets k_i >= deg(i) + g:
///   max_i (deg(i) + g) * sum_j deg(j)^P / deg(i)^P.
Rational minimum_feasible_K(const Graph& g, int P, const Rational& dissipation);

struct NodeCapacityCheck {
    NodeId node = 0;
    double capacity = 0.0;
    double required = 0.0;  // deg + g
    bool ok = false;
};

struct CapacityReport {
    std::vector<NodeCapacityCheck> nodes;

    bool ok() const noexcept;
    std::vector<NodeId> violations() const;
};

/// Per node: k_i >= deg(i) + g, compared exactly.
CapacityReport validate_capacities(const Graph& g, std::span<const Rational> k, const Rational& dissipation);

}  // namespace sandnet
