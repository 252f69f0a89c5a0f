#include "sandnet/capacity.hpp"
#include "sandnet/engine.hpp"
#include "sandnet/error.hpp"
#include "sandnet/kernels.hpp"
#include "sandnet/metrics.hpp"
#include "sandnet/rng.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <vector>

using namespace sandnet;
namespace k = sandnet::kernels;

namespace {

const k::KernelTable* wide() {
    if (!k::cpu_supports(k::Isa::avx2)) return nullptr;
    return k::avx2_table();
}

std::vector<double> random_doubles(std::size_t n, SplitMix64& rng, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) x = (rng.unit() - 0.5) * scale;
    return v;
}

std::vector<std::int32_t> random_mask(std::size_t n, SplitMix64& rng) {
    std::vector<std::int32_t> m(n);
    for (auto& x : m) x = static_cast<std::int32_t>(rng.below(2));
    return m;
}

// Scoped ISA override that restores the default afterwards.
struct IsaScope {
    explicit IsaScope(k::Isa isa) { k::select(isa); }
    ~IsaScope() { k::select(k::parse_isa("auto")); }
};

}  // namespace

TEST(Kernels, ParseIsa) {
    EXPECT_EQ(k::parse_isa("scalar"), k::Isa::scalar);
    EXPECT_EQ(k::parse_isa("avx2"), k::Isa::avx2);
    EXPECT_THROW(k::parse_isa("neon"), ValidationError);
    EXPECT_TRUE(k::cpu_supports(k::Isa::scalar));
    EXPECT_EQ(k::scalar_table().isa, k::Isa::scalar);
}

TEST(Kernels, MarkAboveMatchesScalar) {
    const auto* w = wide();
    if (!w) GTEST_SKIP() << "AVX2 not available";
    const auto& s = k::scalar_table();
    SplitMix64 rng(1);
    for (std::size_t n = 0; n < 70; ++n) {
        auto sand = random_doubles(n, rng, 10);
        auto thr = random_doubles(n, rng, 10);
        if (n > 3) thr[2] = sand[2];  // equality is not "above"
        std::vector<std::int32_t> m1(n), m2(n);
        ASSERT_EQ(s.mark_above_f64(sand, thr, m1), w->mark_above_f64(sand, thr, m2));
        ASSERT_EQ(m1, m2);

        std::vector<std::int64_t> si(n), ti(n);
        for (std::size_t i = 0; i < n; ++i) {
            si[i] = static_cast<std::int64_t>(rng()) >> 2;
            ti[i] = i % 5 == 0 ? si[i] : static_cast<std::int64_t>(rng()) >> 2;
        }
        ASSERT_EQ(s.mark_above_i64(si, ti, m1), w->mark_above_i64(si, ti, m2));
        ASSERT_EQ(m1, m2);
    }
}

TEST(Kernels, ElementwiseUpdatesBitIdentical) {
    const auto* w = wide();
    if (!w) GTEST_SKIP() << "AVX2 not available";
    const auto& s = k::scalar_table();
    SplitMix64 rng(2);
    for (std::size_t n = 0; n < 70; ++n) {
        auto mask = random_mask(n, rng);
        std::vector<std::int32_t> gain(n), row(n);
        for (auto& x : gain) x = static_cast<std::int32_t>(rng.below(9));
        for (auto& x : row) x = static_cast<std::int32_t>(rng.below(2));

        auto a = gain, b = gain;
        s.accumulate_i32(a, row);
        w->accumulate_i32(b, row);
        ASSERT_EQ(a, b);

        auto sand1 = random_doubles(n, rng, 100);
        auto sand2 = sand1;
        auto loss = random_doubles(n, rng, 10);
        s.apply_topples_f64(sand1, mask, gain, loss, 0.1);
        w->apply_topples_f64(sand2, mask, gain, loss, 0.1);
        for (std::size_t i = 0; i < n; ++i)
            ASSERT_EQ(std::bit_cast<std::uint64_t>(sand1[i]), std::bit_cast<std::uint64_t>(sand2[i]));

        std::vector<std::int64_t> e1(n), lossi(n);
        for (std::size_t i = 0; i < n; ++i) {
            e1[i] = static_cast<std::int64_t>(rng.below(1'000'000'000));
            lossi[i] = static_cast<std::int64_t>(rng.below(500));
        }
        for (std::int64_t grain : {std::int64_t{10}, std::int64_t{1} << 40}) {
            auto x1 = e1, x2 = e1;
            s.apply_topples_i64(x1, mask, gain, lossi, 1, grain);
            w->apply_topples_i64(x2, mask, gain, lossi, 1, grain);
            ASSERT_EQ(x1, x2);
        }
    }
}

TEST(Kernels, ReductionsBitIdentical) {
    const auto* w = wide();
    if (!w) GTEST_SKIP() << "AVX2 not available";
    const auto& s = k::scalar_table();
    SplitMix64 rng(3);
    for (std::size_t n = 0; n < 40; ++n) {
        const std::size_t stride = (n + 7) / 8 * 8;
        std::vector<double> mat(n * stride, 0.0);
        for (auto& x : mat) x = rng.unit();
        auto x = random_doubles(stride, rng, 2);
        std::vector<double> y1(n), y2(n);
        s.matvec_f64(mat, stride, std::span(x).first(n), y1);
        w->matvec_f64(mat, stride, std::span(x).first(n), y2);
        ASSERT_EQ(y1, y2);
        auto a = random_doubles(n, rng, 2);
        auto b = random_doubles(n, rng, 2);
        ASSERT_EQ(s.dot_f64(a, b), w->dot_f64(a, b));
    }
}

TEST(Kernels, SimulationsIdenticalAcrossIsas) {
    if (!wide()) GTEST_SKIP() << "AVX2 not available";
    Graph g = random_connected_graph(37, 0.1, 5);
    SimulationConfig cfg;
    cfg.k = capacities(g, Rational(880), 2);
    cfg.g = Rational(1, 10);
    cfg.grains = 2500;
    cfg.seed = 77;
    for (auto arith : {Arithmetic::exact, Arithmetic::fast}) {
        cfg.arithmetic = arith;
        SimulationResult a, b;
        {
            IsaScope scope(k::Isa::scalar);
            a = simulate(g, cfg);
        }
        {
            IsaScope scope(k::Isa::avx2);
            b = simulate(g, cfg);
        }
        EXPECT_EQ(a.topples, b.topples);
        EXPECT_EQ(a.ntnt_series, b.ntnt_series);
        EXPECT_EQ(a.sand, b.sand);
    }
    IsaScope scope(k::Isa::scalar);
    auto e1 = eigenvector_centrality(g).values;
    k::select(k::Isa::avx2);
    auto e2 = eigenvector_centrality(g).values;
    EXPECT_EQ(e1, e2);
}
