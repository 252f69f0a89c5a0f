#include "kernel_tables.hpp"

namespace sandnet::kernels::detail {

namespace {

std::size_t mark_above_f64(std::span<const double> sand, std::span<const double> threshold,
                           std::span<std::int32_t> mask) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < sand.size(); ++i) {
        const bool over = sand[i] > threshold[i];
        mask[i] = over ? 1 : 0;
        count += over;
    }
    return count;
}

std::size_t mark_above_i64(std::span<const std::int64_t> sand, std::span<const std::int64_t> threshold,
                           std::span<std::int32_t> mask) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < sand.size(); ++i) {
        const bool over = sand[i] > threshold[i];
        mask[i] = over ? 1 : 0;
        count += over;
    }
    return count;
}

void accumulate_i32(std::span<std::int32_t> dst, std::span<const std::int32_t> row) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += row[i];
}

void apply_topples_f64(std::span<double> sand, std::span<const std::int32_t> mask, std::span<const std::int32_t> gain,
                       std::span<const double> loss, double dissipation) {
    for (std::size_t i = 0; i < sand.size(); ++i) {
        const double m = static_cast<double>(mask[i]);
        double s = sand[i];
        s = s - m * dissipation;
        s = s - m * loss[i];
        s = s + static_cast<double>(gain[i]);
        sand[i] = s;
    }
}

void apply_topples_i64(std::span<std::int64_t> sand, std::span<const std::int32_t> mask,
                       std::span<const std::int32_t> gain, std::span<const std::int64_t> loss,
                       std::int64_t dissipation, std::int64_t grain) {
    for (std::size_t i = 0; i < sand.size(); ++i) {
        const std::int64_t m = mask[i];
        sand[i] = sand[i] - m * (dissipation + loss[i]) + static_cast<std::int64_t>(gain[i]) * grain;
    }
}

// Four interleaved partial sums combined as (s0 + s2) + (s1 + s3), then the
// tail in order: the same association as the 4-lane AVX2 loop, so both give
// bit-identical results.
double dot_f64(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (std::size_t l = 0; l < 4; ++l) lane[l] += a[i + l] * b[i + l];
    double sum = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void matvec_f64(std::span<const double> matrix, std::size_t stride, std::span<const double> x, std::span<double> y) {
    const std::size_t n = y.size();
    for (std::size_t r = 0; r < n; ++r) y[r] = dot_f64(matrix.subspan(r * stride, n), x.first(n));
}

}  // namespace

const KernelTable kScalarTable{
    Isa::scalar, mark_above_f64, mark_above_i64, accumulate_i32, apply_topples_f64, apply_topples_i64,
    matvec_f64,  dot_f64,
};

}  // namespace sandnet::kernels::detail
