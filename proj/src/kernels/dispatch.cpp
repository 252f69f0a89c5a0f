#include "kernel_tables.hpp"

#include "sandnet/error.hpp"

#include <atomic>
#include <string>

namespace sandnet::kernels {

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& scalar_table() noexcept {
    return detail::kScalarTable;
}

const KernelTable* avx2_table() noexcept {
#if SANDNET_HAVE_AVX2
    return &detail::kAvx2Table;
#else
    return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if SANDNET_HAVE_AVX2
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
            return false;
#endif
    }
    return false;
}

namespace {

const KernelTable* best_table() noexcept {
    if (cpu_supports(Isa::avx2)) return avx2_table();
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> table{best_table()};
    return table;
}

}  // namespace

const KernelTable& active() noexcept {
    return *current().load(std::memory_order_acquire);
}

void select(Isa isa) {
    if (!cpu_supports(isa)) throw ValidationError("kernel ISA '" + std::string(to_string(isa)) + "' is not available");
    current().store(isa == Isa::avx2 ? avx2_table() : &scalar_table(), std::memory_order_release);
}

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "auto") return best_table()->isa;
    throw ValidationError("unknown kernel ISA '" + std::string(name) + "' (expected scalar, avx2 or auto)");
}

}  // namespace sandnet::kernels
