#pragma once
// Principal eigenvector of each connected component from a full symmetric
// eigendecomposition. Unit norm per component, non-negative, singletons zero.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline std::vector<double> dense_eigenvector(const std::vector<std::vector<int>>& adj) {
    const std::size_t n = adj.size();
    std::vector<int> comp(n, -1);
    int count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = count;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (adj[u][v] && comp[v] < 0) {
                    comp[v] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    std::vector<double> out(n, 0.0);
    for (int c = 0; c < count; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < n; ++v)
            if (comp[v] == c) members.push_back(v);
        if (members.size() < 2) continue;
        const auto m = static_cast<Eigen::Index>(members.size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) a(i, j) = adj[members[i]][members[j]];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
        Eigen::VectorXd v = solver.eigenvectors().col(m - 1);
        if (v.sum() < 0) v = -v;
        v /= v.norm();
        for (Eigen::Index i = 0; i < m; ++i) out[members[i]] = std::abs(v(i));
    }
    return out;
}

}  // namespace oracle
