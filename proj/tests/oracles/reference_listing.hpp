#pragma once
// Line-for-line port of the reference listing: adjacency matrix G, sand S,
// tallies T, deg = row sums. Exact rationals throughout, drops forced instead
// of randint.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Matrix = std::vector<std::vector<int>>;

struct ListingRun {
    std::vector<Q> S;
    std::vector<std::uint64_t> T;
    std::vector<std::uint64_t> ntnt;  // sum(T) after each drop
};

inline void cascade(const Matrix& G, const Q& g, const std::vector<Q>& k, std::vector<Q>& S,
                    std::vector<std::uint64_t>& T) {
    const std::size_t N = G.size();
    std::vector<int> deg(N, 0);
    for (std::size_t i = 0; i < N; ++i)
        for (int e : G[i]) deg[i] += e;
    while (true) {
        std::vector<std::size_t> A;
        for (std::size_t j = 0; j < N; ++j)
            if (S[j] > k[j]) A.push_back(j);
        if (A.empty()) break;
        std::vector<std::size_t> B;
        for (std::size_t j : A) {
            T[j] += 1;
            S[j] -= g;
            S[j] -= deg[j];
            for (std::size_t m = 0; m < N; ++m)
                if (G[j][m] == 1) B.push_back(m);
        }
        for (std::size_t b : B) S[b] += 1;
    }
}

inline ListingRun simulation(const Matrix& G, const std::vector<std::size_t>& drops, const Q& g,
                            const std::vector<Q>& k) {
    const std::size_t N = G.size();
    ListingRun out;
    out.S.assign(N, Q(0));
    out.T.assign(N, 0);
    std::uint64_t total = 0;
    for (std::size_t i : drops) {
        out.S[i] += 1;
        if (out.S[i] > k[i]) cascade(G, g, k, out.S, out.T);
        total = 0;
        for (auto t : out.T) total += t;
        out.ntnt.push_back(total);
    }
    return out;
}

}  // namespace oracle
