#pragma once

// Shared helpers for the unit tests: file lookup under the source tree,
// simple value generators driven by std::mt19937_64, and independent
// brute-force oracles the library implementations are checked against.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "groundkit/geometry.hpp"
#include "groundkit/imaging.hpp"

namespace testsupport {

// Root of the tests/ source dir, exported by CTest (falls back for direct
// binary invocation from the build tree).
inline std::string data_dir() {
    if (const char* env = std::getenv("GROUNDKIT_TEST_DATA")) return env;
#ifdef GROUNDKIT_TEST_DATA_DIR
    return GROUNDKIT_TEST_DATA_DIR;
#else
    return "../tests";
#endif
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("test data missing: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random valid rect within the given bounds, with a minimum side so that
// fraction-based operations stay well away from degenerate widths.
inline groundkit::geom::Rect random_rect(std::mt19937_64& rng, double width, double height,
                                         double min_side = 2.0) {
    groundkit::geom::Rect r;
    r.x_min = uniform(rng, 0.0, width - min_side);
    r.x_max = uniform(rng, r.x_min + min_side, width);
    r.y_min = uniform(rng, 0.0, height - min_side);
    r.y_max = uniform(rng, r.y_min + min_side, height);
    return r;
}

inline groundkit::geom::Point random_point_in(std::mt19937_64& rng,
                                              const groundkit::geom::Rect& r) {
    return {uniform(rng, r.x_min, r.x_max), uniform(rng, r.y_min, r.y_max)};
}

// Second, naive even-odd implementation used as the membership oracle.
// Walks every edge with the classic crossing parity test; boundary points
// are resolved by a small inward probe average (callers avoid exact-edge
// queries instead, see polygon tests).
inline bool polygon_contains_naive(const groundkit::geom::Point& p,
                                   const std::vector<groundkit::geom::Point>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
    }
    return inside;
}

// Rasterized membership: scan-convert the polygon into a coarse mask and
// answer queries from the mask. Only trustworthy at least one pixel away
// from any edge, which the property tests enforce.
class RasterPolygonOracle {
public:
    RasterPolygonOracle(const std::vector<groundkit::geom::Point>& poly, int size)
        : size_(size), mask_(std::size_t(size) * std::size_t(size), 0) {
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const groundkit::geom::Point c{x + 0.5, y + 0.5};
                mask_[std::size_t(y) * std::size_t(size) + std::size_t(x)] =
                    polygon_contains_naive(c, poly) ? 1 : 0;
            }
        }
    }

    bool contains(const groundkit::geom::Point& p) const {
        const int x = int(p.x);
        const int y = int(p.y);
        if (x < 0 || y < 0 || x >= size_ || y >= size_) return false;
        return mask_[std::size_t(y) * std::size_t(size_) + std::size_t(x)] != 0;
    }

    // Distance from p to the nearest polygon edge, so tests can skip
    // queries the coarse mask cannot adjudicate.
    static double edge_distance(const groundkit::geom::Point& p,
                                const std::vector<groundkit::geom::Point>& poly) {
        double best = 1e300;
        const std::size_t n = poly.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const auto& a = poly[i];
            const auto& b = poly[j];
            const double dx = b.x - a.x;
            const double dy = b.y - a.y;
            const double len2 = dx * dx + dy * dy;
            double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
            t = t < 0 ? 0 : (t > 1 ? 1 : t);
            const double ex = a.x + t * dx - p.x;
            const double ey = a.y + t * dy - p.y;
            const double d = std::sqrt(ex * ex + ey * ey);
            if (d < best) best = d;
        }
        return best;
    }

private:
    int size_;
    std::vector<unsigned char> mask_;
};

// Small flat-color raster with a few primitive marks, for imaging tests.
inline groundkit::img::Raster test_raster(int width, int height, std::uint64_t seed) {
    groundkit::img::Raster r;
    r.width = width;
    r.height = height;
    r.pixels.resize(std::size_t(width) * std::size_t(height) * 3);
    std::mt19937_64 rng(seed);
    for (auto& b : r.pixels) b = static_cast<unsigned char>(rng() & 0xff);
    return r;
}

}  // namespace testsupport
