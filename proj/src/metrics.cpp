#include "sandnet/metrics.hpp"

#include "sandnet/io.hpp"
#include "sandnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sandnet {

MetricVector degree_centrality(const Graph& g) {
    MetricVector out{"Degree", std::vector<double>(g.size())};
    for (NodeId i = 0; i < g.size(); ++i) out.values[i] = static_cast<double>(g.degree(i));
    return out;
}

namespace {

// Power iteration on A + I restricted to `nodes`; writes unit-norm scores into `out`.
void score_component(const Graph& g, const std::vector<NodeId>& nodes, const EigenvectorOptions& options,
                     std::vector<double>& out) {
    const std::size_t m = nodes.size();
    const std::size_t stride = (m + 3) / 4 * 4;
    std::vector<double> matrix(m * stride, 0.0);
    std::map<NodeId, std::size_t> local;
    for (std::size_t i = 0; i < m; ++i) local.emplace(nodes[i], i);
    for (std::size_t i = 0; i < m; ++i) {
        matrix[i * stride + i] = 1.0;
        for (NodeId w : g.neighbors(nodes[i])) matrix[i * stride + local.at(w)] = 1.0;
    }

    const auto& k = kernels::active();
    std::vector<double> x(m, 1.0 / std::sqrt(static_cast<double>(m)));
    std::vector<double> y(m, 0.0);
    bool converged = false;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        k.matvec_f64(matrix, stride, x, y);
        const double norm = std::sqrt(k.dot_f64(y, y));
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            y[i] /= norm;
            change = std::max(change, std::abs(y[i] - x[i]));
        }
        x.swap(y);
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("eigenvector centrality did not converge within " +
                               std::to_string(options.max_iterations) + " iterations; raise max_iterations");
    }
    for (std::size_t i = 0; i < m; ++i) out[nodes[i]] = x[i];
}

}  // namespace

MetricVector eigenvector_centrality(const Graph& g, const EigenvectorOptions& options) {
    if (g.size() == 0) throw ValidationError("eigenvector centrality of an empty graph");
    MetricVector out{"Eigenvector", std::vector<double>(g.size(), 0.0)};

    const auto comp = connected_components(g);
    const std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<std::vector<NodeId>> members(count);
    for (NodeId i = 0; i < g.size(); ++i) members[comp[i]].push_back(i);

    std::size_t largest = 0;
    for (std::size_t c = 1; c < count; ++c) {
        if (members[c].size() > members[largest].size()) largest = c;
    }
    for (std::size_t c = 0; c < count; ++c) {
        if (members[c].size() < 2) continue;
        if (options.scope == ComponentScope::largest && c != largest) continue;
        score_component(g, members[c], options, out.values);
    }
    return out;
}

namespace {

template <typename Num>
std::vector<Num> brandes(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<Num> centrality(n, Num(0));
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<Num> sigma(n);
    std::vector<Num> delta(n);
    std::vector<long> dist(n);
    std::vector<NodeId> order;
    std::vector<NodeId> queue;
    order.reserve(n);
    queue.reserve(n);

    for (NodeId s = 0; s < n; ++s) {
        for (NodeId v = 0; v < n; ++v) {
            preds[v].clear();
            sigma[v] = Num(0);
            delta[v] = Num(0);
            dist[v] = -1;
        }
        sigma[s] = Num(1);
        dist[s] = 0;
        order.clear();
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId v = queue[head];
            order.push_back(v);
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (Num(1) + delta[w]);
            if (w != s) centrality[w] += delta[w];
        }
    }
    // Each unordered pair was visited from both ends.
    for (auto& c : centrality) c /= Num(2);
    return centrality;
}

}  // namespace

MetricVector betweenness_centrality(const Graph& g) {
    return {"Betweenness", brandes<double>(g)};
}

std::vector<Rational> betweenness_centrality_exact(const Graph& g) {
    return brandes<Rational>(g);
}

std::vector<GroupMeasure> group_measures(const Roster& roster) {
    std::vector<GroupMeasure> out;
    for (const std::string& group : roster.groups()) {
        GroupMeasure m;
        m.group = group;
        double years = 0.0;
        double grades = 0.0;
        double intergrades = 0.0;
        std::size_t females = 0;
        bool all_intergrades = true;
        for (const auto& r : roster.records()) {
            if (r.group != group) continue;
            ++m.size;
            years += r.year;
            grades += r.grade;
            females += r.gender == Gender::female;
            if (r.intergrade) {
                intergrades += *r.intergrade;
            } else {
                all_intergrades = false;
            }
        }
        const auto size = static_cast<double>(m.size);
        m.avg_year = years / size;
        m.avg_grade = grades / size;
        m.gender_ratio = static_cast<double>(females) / size;
        if (all_intergrades) m.avg_intergrade = intergrades / size;
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

bool constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::optional<double> try_pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw StatisticsError("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                              std::to_string(ys.size()) + ")");
    }
    if (xs.size() < 2) throw StatisticsError("pearson: need at least two points");
    if (constant(xs) || constant(ys)) return std::nullopt;

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    return std::clamp(r, -1.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    auto r = try_pearson(xs, ys);
    if (!r) throw StatisticsError("pearson: r is undefined for a constant input");
    return *r;
}

std::string emit_metric_csv(const MetricVector& metric, std::string_view key_column, std::string_view comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    out << key_column << ",value\n";
    for (std::size_t i = 0; i < metric.values.size(); ++i) {
        out << i << ',' << io::format_double(metric.values[i]) << '\n';
    }
    return out.str();
}

std::string emit_group_measures_csv(std::span<const GroupMeasure> groups, std::string_view comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "group,size,avg_intergrade,avg_year,gender_ratio,avg_grade\n";
    for (const auto& m : groups) {
        out << m.group << ',' << m.size << ','
            << (m.avg_intergrade ? io::format_double(*m.avg_intergrade) : std::string()) << ','
            << io::format_double(m.avg_year) << ',' << io::format_double(m.gender_ratio) << ','
            << io::format_double(m.avg_grade) << '\n';
    }
    return out.str();
}

}  // namespace sandnet
