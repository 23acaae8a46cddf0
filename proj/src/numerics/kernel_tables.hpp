#pragma once

#include "locc/numerics/kernels.hpp"

namespace locc::kernels::detail {

extern const KernelTable kScalarTable;
#ifdef LOCC_HAVE_AVX2
extern const KernelTable kAvx2Table;
#endif

}  // namespace locc::kernels::detail
