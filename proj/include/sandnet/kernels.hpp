#pragma once

// Data-parallel inner loops of the cascade engine and the centrality solver.
//
// Every kernel has a scalar reference version and, on x86-64, an AVX2 version
// compiled with a function-level target attribute. `active()` picks the best
// table the running CPU supports. Every table produces bit-identical results:
// the scalar reductions sum in the same lane order as the vector ones.

#include <cstdint>
#include <span>
#include <string_view>

namespace sandnet::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;

    /// mask[i] = sand[i] > threshold[i]; returns the number of set entries.
    std::size_t (*mark_above_f64)(std::span<const double> sand, std::span<const double> threshold,
                                  std::span<std::int32_t> mask);
    std::size_t (*mark_above_i64)(std::span<const std::int64_t> sand, std::span<const std::int64_t> threshold,
                                  std::span<std::int32_t> mask);

    /// dst[i] += row[i]
    void (*accumulate_i32)(std::span<std::int32_t> dst, std::span<const std::int32_t> row);

    /// sand[i] = ((sand[i] - m*dissipation) - m*loss[i]) + gain[i],  m = mask[i] ? 1 : 0
    void (*apply_topples_f64)(std::span<double> sand, std::span<const std::int32_t> mask,
                              std::span<const std::int32_t> gain, std::span<const double> loss, double dissipation);

    /// sand[i] = sand[i] - m*(dissipation + loss[i]) + gain[i]*grain
    void (*apply_topples_i64)(std::span<std::int64_t> sand, std::span<const std::int32_t> mask,
                              std::span<const std::int32_t> gain, std::span<const std::int64_t> loss,
                              std::int64_t dissipation, std::int64_t grain);

    /// y = A x for a row-major n x n matrix whose rows are `stride` apart.
    void (*matvec_f64)(std::span<const double> matrix, std::size_t stride, std::span<const double> x,
                       std::span<double> y);

    double (*dot_f64)(std::span<const double> a, std::span<const double> b);
};

const KernelTable& scalar_table() noexcept;

/// Null when AVX2 support was not compiled in.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Table used by the engine and metrics. Defaults to the widest supported ISA.
const KernelTable& active() noexcept;

/// Throws ValidationError if the CPU (or the build) lacks `isa`.
void select(Isa isa);

Isa parse_isa(std::string_view name);  // "scalar", "avx2", or "auto"

}  // namespace sandnet::kernels
