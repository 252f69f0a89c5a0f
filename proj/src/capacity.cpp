#include "sandnet/capacity.hpp"

#include "sandnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace sandnet {

namespace {

void require_no_isolated(const Graph& g) {
    if (g.size() == 0) throw ValidationError("graph has no nodes");
    for (NodeId i = 0; i < g.size(); ++i) {
        if (g.degree(i) == 0) {
            throw ValidationError("node " + std::to_string(i) + " is isolated; degree-power capacities need deg >= 1");
        }
    }
}

Rational degree_power(std::size_t degree, int P) {
    BigInt base = static_cast<unsigned long long>(degree);
    BigInt power = boost::multiprecision::pow(base, static_cast<unsigned>(P < 0 ? -P : P));
    return P < 0 ? Rational(BigInt(1), power) : Rational(power);
}

Rational degree_power_sum(const Graph& g, int P) {
    Rational sum = 0;
    for (NodeId i = 0; i < g.size(); ++i) sum += degree_power(g.degree(i), P);
    return sum;
}

}  // namespace

std::vector<Rational> capacities(const Graph& g, const Rational& K, int P) {
    if (K <= 0) throw ValidationError("network capacity K must be positive");
    require_no_isolated(g);
    const Rational sum = degree_power_sum(g, P);
    std::vector<Rational> k;
    k.reserve(g.size());
    for (NodeId i = 0; i < g.size(); ++i) k.push_back(K * degree_power(g.degree(i), P) / sum);
    return k;
}

std::vector<double> capacities_real(const Graph& g, double K, double P) {
    if (!(K > 0.0)) throw ValidationError("network capacity K must be positive");
    require_no_isolated(g);
    std::vector<double> powered(g.size());
    double sum = 0.0;
    for (NodeId i = 0; i < g.size(); ++i) {
        powered[i] = std::pow(static_cast<double>(g.degree(i)), P);
        sum += powered[i];
    }
    for (double& v : powered) v = K * v / sum;
    return powered;
}

Rational paper_min_K(const Graph& g, int P, const Rational& dissipation) {
    require_no_isolated(g);
    const auto deg = degree_sequence(g);
    const auto [lo, hi] = std::minmax_element(deg.begin(), deg.end());
    const Rational min_deg(static_cast<unsigned long long>(*lo));
    const Rational max_deg(static_cast<unsigned long long>(*hi));
    return (min_deg + dissipation) * degree_power_sum(g, P) / (P >= 0 ? min_deg : max_deg);
}

Rational minimum_feasible_K(const Graph& g, int P, const Rational& dissipation) {
    require_no_isolated(g);
    const Rational sum = degree_power_sum(g, P);
    Rational best = 0;
    for (NodeId i = 0; i < g.size(); ++i) {
        const Rational need = (Rational(static_cast<unsigned long long>(g.degree(i))) + dissipation) * sum /
                              degree_power(g.degree(i), P);
        best = std::max(best, need);
    }
    return best;
}

bool CapacityReport::ok() const noexcept {
    return std::all_of(nodes.begin(), nodes.end(), [](const NodeCapacityCheck& c) { return c.ok; });
}

std::vector<NodeId> CapacityReport::violations() const {
    std::vector<NodeId> out;
    for (const auto& c : nodes) {
        if (!c.ok) out.push_back(c.node);
    }
    return out;
}

CapacityReport validate_capacities(const Graph& g, std::span<const Rational> k, const Rational& dissipation) {
    if (k.size() != g.size()) {
        throw ValidationError("capacity vector has " + std::to_string(k.size()) + " entries for " +
                              std::to_string(g.size()) + " nodes");
    }
    CapacityReport report;
    report.nodes.reserve(g.size());
    for (NodeId i = 0; i < g.size(); ++i) {
        const Rational required = Rational(static_cast<unsigned long long>(g.degree(i))) + dissipation;
        report.nodes.push_back({i, to_double(k[i]), to_double(required), k[i] >= required});
    }
    return report;
}

}  // namespace sandnet
