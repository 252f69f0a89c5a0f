#pragma once

#include "sandnet/kernels.hpp"

#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
#define SANDNET_HAVE_AVX2 1
#else
#define SANDNET_HAVE_AVX2 0
#endif

namespace sandnet::kernels::detail {

extern const KernelTable kScalarTable;
#if SANDNET_HAVE_AVX2
extern const KernelTable kAvx2Table;
#endif

}  // namespace sandnet::kernels::detail
