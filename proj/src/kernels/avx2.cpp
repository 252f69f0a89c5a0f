#include "kernel_tables.hpp"

#if SANDNET_HAVE_AVX2

#include <immintrin.h>

#include <limits>

#define SANDNET_AVX2 __attribute__((target("avx2,popcnt")))

namespace sandnet::kernels::detail {

namespace {

// Packs two 4-lane 64-bit compare masks into eight 0/1 int32 lanes.
SANDNET_AVX2 inline __m256i pack_masks(__m256i lo, __m256i hi) {
    const __m256i even = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
    const __m256i a = _mm256_permutevar8x32_epi32(lo, even);
    const __m256i b = _mm256_permutevar8x32_epi32(hi, even);
    return _mm256_and_si256(_mm256_blend_epi32(a, b, 0xF0), _mm256_set1_epi32(1));
}

SANDNET_AVX2 inline __m256i load(const std::int64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

SANDNET_AVX2 std::size_t mark_above_f64(std::span<const double> sand, std::span<const double> threshold,
                                        std::span<std::int32_t> mask) {
    const std::size_t n = sand.size();
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d c0 =
            _mm256_cmp_pd(_mm256_loadu_pd(sand.data() + i), _mm256_loadu_pd(threshold.data() + i), _CMP_GT_OQ);
        const __m256d c1 = _mm256_cmp_pd(_mm256_loadu_pd(sand.data() + i + 4),
                                         _mm256_loadu_pd(threshold.data() + i + 4), _CMP_GT_OQ);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(mask.data() + i),
                            pack_masks(_mm256_castpd_si256(c0), _mm256_castpd_si256(c1)));
        count += static_cast<std::size_t>(_mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(c0))) +
                                          _mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(c1))));
    }
    for (; i < n; ++i) {
        const bool over = sand[i] > threshold[i];
        mask[i] = over ? 1 : 0;
        count += over;
    }
    return count;
}

SANDNET_AVX2 std::size_t mark_above_i64(std::span<const std::int64_t> sand, std::span<const std::int64_t> threshold,
                                        std::span<std::int32_t> mask) {
    const std::size_t n = sand.size();
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i c0 = _mm256_cmpgt_epi64(load(sand.data() + i), load(threshold.data() + i));
        const __m256i c1 = _mm256_cmpgt_epi64(load(sand.data() + i + 4), load(threshold.data() + i + 4));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(mask.data() + i), pack_masks(c0, c1));
        count += static_cast<std::size_t>(
            _mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(c0)))) +
            _mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(c1)))));
    }
    for (; i < n; ++i) {
        const bool over = sand[i] > threshold[i];
        mask[i] = over ? 1 : 0;
        count += over;
    }
    return count;
}

SANDNET_AVX2 void accumulate_i32(std::span<std::int32_t> dst, std::span<const std::int32_t> row) {
    const std::size_t n = dst.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
        const auto* r = reinterpret_cast<const __m256i*>(row.data() + i);
        _mm256_storeu_si256(d, _mm256_add_epi32(_mm256_loadu_si256(d), _mm256_loadu_si256(r)));
    }
    for (; i < n; ++i) dst[i] += row[i];
}

SANDNET_AVX2 void apply_topples_f64(std::span<double> sand, std::span<const std::int32_t> mask,
                                    std::span<const std::int32_t> gain, std::span<const double> loss,
                                    double dissipation) {
    const std::size_t n = sand.size();
    const __m256d g = _mm256_set1_pd(dissipation);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(mask.data() + i)));
        const __m256d add = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(gain.data() + i)));
        __m256d s = _mm256_loadu_pd(sand.data() + i);
        s = _mm256_sub_pd(s, _mm256_mul_pd(m, g));
        s = _mm256_sub_pd(s, _mm256_mul_pd(m, _mm256_loadu_pd(loss.data() + i)));
        s = _mm256_add_pd(s, add);
        _mm256_storeu_pd(sand.data() + i, s);
    }
    for (; i < n; ++i) {
        const double m = static_cast<double>(mask[i]);
        double s = sand[i];
        s = s - m * dissipation;
        s = s - m * loss[i];
        s = s + static_cast<double>(gain[i]);
        sand[i] = s;
    }
}

void apply_topples_i64_tail(std::span<std::int64_t> sand, std::span<const std::int32_t> mask,
                            std::span<const std::int32_t> gain, std::span<const std::int64_t> loss,
                            std::int64_t dissipation, std::int64_t grain, std::size_t from) {
    for (std::size_t i = from; i < sand.size(); ++i) {
        const std::int64_t m = mask[i];
        sand[i] = sand[i] - m * (dissipation + loss[i]) + static_cast<std::int64_t>(gain[i]) * grain;
    }
}

SANDNET_AVX2 void apply_topples_i64(std::span<std::int64_t> sand, std::span<const std::int32_t> mask,
                                    std::span<const std::int32_t> gain, std::span<const std::int64_t> loss,
                                    std::int64_t dissipation, std::int64_t grain) {
    // _mm256_mul_epi32 multiplies the low signed 32 bits of each lane.
    if (grain < std::numeric_limits<std::int32_t>::min() || grain > std::numeric_limits<std::int32_t>::max()) {
        apply_topples_i64_tail(sand, mask, gain, loss, dissipation, grain, 0);
        return;
    }
    const std::size_t n = sand.size();
    const __m256i d = _mm256_set1_epi64x(dissipation);
    const __m256i q = _mm256_set1_epi64x(grain);
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i m = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(mask.data() + i)));
        const __m256i add =
            _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(gain.data() + i)));
        auto* sp = reinterpret_cast<__m256i*>(sand.data() + i);
        const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(loss.data() + i));
        const __m256i lose = _mm256_and_si256(_mm256_add_epi64(d, l), _mm256_sub_epi64(zero, m));
        __m256i s = _mm256_loadu_si256(sp);
        s = _mm256_add_epi64(_mm256_sub_epi64(s, lose), _mm256_mul_epi32(add, q));
        _mm256_storeu_si256(sp, s);
    }
    apply_topples_i64_tail(sand, mask, gain, loss, dissipation, grain, i);
}

SANDNET_AVX2 inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

SANDNET_AVX2 double dot_f64(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    }
    double sum = horizontal_sum(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

SANDNET_AVX2 void matvec_f64(std::span<const double> matrix, std::size_t stride, std::span<const double> x,
                             std::span<double> y) {
    const std::size_t n = y.size();
    for (std::size_t r = 0; r < n; ++r) y[r] = dot_f64(matrix.subspan(r * stride, n), x.first(n));
}

}  // namespace

const KernelTable kAvx2Table{
    Isa::avx2, mark_above_f64, mark_above_i64, accumulate_i32, apply_topples_f64, apply_topples_i64,
    matvec_f64, dot_f64,
};

}  // namespace sandnet::kernels::detail

#endif  // SANDNET_HAVE_AVX2
