#ifndef TQD_IMAGE_OPS_H_
#define TQD_IMAGE_OPS_H_

#include "tqd/kernels.h"
#include "tqd/types.h"

namespace tqd {

// Copy of `in` with a border of `radius` pixels on every side, filled by
// edge replication or toroidal wrap.
Image PadImage(const Image& in, int radius, Boundary boundary);

// Same-size spatial convolution with a square kernel. Kernels used here
// are all point-symmetric, so correlation and convolution coincide.
// Taps that are exactly zero are skipped.
Image ConvolveSame(const Image& in, const SpatialKernel& kernel,
                   Boundary boundary);

// out(r, c) = in(r + row_offset, c + col_offset), with out-of-range
// coordinates resolved by the boundary rule.
Image SampleShifted(const Image& in, int row_offset, int col_offset,
                    Boundary boundary);

// Maximum over the sliding square window of side 2*half_width+1 centered
// at each pixel.
Image SlidingWindowMax(const Image& in, int half_width, Boundary boundary);

}  // namespace tqd

#endif  // TQD_IMAGE_OPS_H_
