#pragma once

#include "lame/grid.hpp"

namespace lame::detail {

/// In-place unitary DFT of one component (N^n samples, 64-byte aligned).
/// sign = -1 forward, +1 inverse.
void fft_inplace(cplx* data, const Grid& grid, int sign);

}  // namespace lame::detail
