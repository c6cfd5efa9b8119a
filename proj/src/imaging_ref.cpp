#include "groundkit/imaging_ref.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace groundkit::img {

namespace {

double catmull_rom(double t) {
    const double a = -0.5;
    t = std::abs(t);
    if (t <= 1.0) return (a + 2.0) * t * t * t - (a + 3.0) * t * t + 1.0;
    if (t < 2.0) return a * t * t * t - 5.0 * a * t * t + 8.0 * a * t - 4.0 * a;
    return 0.0;
}

}  // namespace

Raster upscale_bicubic_reference(const Raster& src, int factor) {
    if (factor < 1) throw std::invalid_argument("upscale_bicubic_reference: factor must be >= 1");
    Raster out;
    out.width = src.width * factor;
    out.height = src.height * factor;
    out.pixels.resize(std::size_t(out.width) * out.height * 3);

    for (int oy = 0; oy < out.height; ++oy) {
        const double sy = (oy + 0.5) / factor - 0.5;
        const int by = int(std::floor(sy));
        for (int ox = 0; ox < out.width; ++ox) {
            const double sx = (ox + 0.5) / factor - 0.5;
            const int bx = int(std::floor(sx));
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int m = -1; m <= 2; ++m) {
                    const int iy = std::clamp(by + m, 0, src.height - 1);
                    const double wy = catmull_rom(sy - (by + m));
                    for (int k = -1; k <= 2; ++k) {
                        const int ix = std::clamp(bx + k, 0, src.width - 1);
                        const double wx = catmull_rom(sx - (bx + k));
                        acc += wx * wy * src.at(ix, iy)[c];
                    }
                }
                out.at(ox, oy)[c] =
                    std::uint8_t(std::clamp<long>(std::lround(acc), 0, 255));
            }
        }
    }
    return out;
}

}  // namespace groundkit::img
