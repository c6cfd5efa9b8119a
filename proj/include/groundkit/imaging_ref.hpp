#pragma once

#include "groundkit/imaging.hpp"

namespace groundkit::img {

// Serial reference resampler: direct non-separable 4x4 convolution per
// output pixel with the same Catmull-Rom kernel. Kept deliberately naive
// and independent of the optimized path; tests and the kernel benchmark
// compare the two.
Raster upscale_bicubic_reference(const Raster& src, int factor);

}  // namespace groundkit::img
