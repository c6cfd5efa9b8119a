#include "groundkit/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace groundkit::img {

Raster Raster::filled(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Raster out;
    out.width = w;
    out.height = h;
    out.pixels.resize(std::size_t(w) * h * 3);
    for (std::size_t i = 0; i < out.pixels.size(); i += 3) {
        out.pixels[i] = r;
        out.pixels[i + 1] = g;
        out.pixels[i + 2] = b;
    }
    return out;
}

TargetRegion TargetRegion::from_polygon(std::vector<geom::Point> pts) {
    if (pts.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    TargetRegion r;
    r.kind = Kind::Polygon;
    r.polygon = std::move(pts);
    return r;
}

geom::Point TargetRegion::center() const {
    if (kind == Kind::Bbox) return bbox.center();
    // Shoelace centroid; vertex mean if the polygon has no area.
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = polygon[i];
        const auto& q = polygon[(i + 1) % n];
        const double w = p.x * q.y - q.x * p.y;
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (std::abs(a2) < 1e-12) {
        double sx = 0.0, sy = 0.0;
        for (const auto& p : polygon) {
            sx += p.x;
            sy += p.y;
        }
        return {sx / double(n), sy / double(n)};
    }
    return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

geom::Rect TargetRegion::bounding_rect() const {
    if (kind == Kind::Bbox) return bbox;
    geom::Rect r{polygon[0].x, polygon[0].y, polygon[0].x, polygon[0].y};
    for (const auto& p : polygon) {
        r.x_min = std::min(r.x_min, p.x);
        r.y_min = std::min(r.y_min, p.y);
        r.x_max = std::max(r.x_max, p.x);
        r.y_max = std::max(r.y_max, p.y);
    }
    return r;
}

Raster crop(const Raster& src, const geom::Rect& r) {
    const geom::Rect g = geom::grid_crop_rect(r, src.bounds());
    if (!g.valid()) throw std::invalid_argument("crop: rect does not intersect image");

    const int x0 = int(g.x_min), y0 = int(g.y_min);
    const int w = int(g.width()), h = int(g.height());
    Raster out;
    out.width = w;
    out.height = h;
    out.pixels.resize(std::size_t(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        std::memcpy(out.at(0, y), src.at(x0, y0 + y), std::size_t(w) * 3);
    }
    return out;
}

namespace {

// Catmull-Rom kernel, a = -0.5.
double cubic_weight(double t) {
    t = std::abs(t);
    if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

struct TapTable {
    std::vector<std::array<int, 4>> idx;
    std::vector<std::array<double, 4>> w;
};

// Sample positions follow the pixel-center convention so factor 1 is exact
// identity. Border taps clamp (edge replication).
TapTable make_taps(int out_size, int in_size, int factor) {
    TapTable t;
    t.idx.resize(out_size);
    t.w.resize(out_size);
    for (int o = 0; o < out_size; ++o) {
        const double s = (o + 0.5) / factor - 0.5;
        const int base = int(std::floor(s));
        for (int k = 0; k < 4; ++k) {
            const int i = base - 1 + k;
            t.idx[o][k] = std::clamp(i, 0, in_size - 1);
            t.w[o][k] = cubic_weight(s - i);
        }
    }
    return t;
}

std::uint8_t to_byte(double v) {
    return std::uint8_t(std::clamp<long>(std::lround(v), 0, 255));
}

}  // namespace

Raster upscale_bicubic(const Raster& src, int factor) {
    if (factor < 1) throw std::invalid_argument("upscale_bicubic: factor must be >= 1");
    if (factor == 1) return src;

    const int ow = src.width * factor;
    const int oh = src.height * factor;
    const TapTable tx = make_taps(ow, src.width, factor);
    const TapTable ty = make_taps(oh, src.height, factor);

    // Separable: horizontal pass into a double buffer, then vertical pass.
    std::vector<double> mid(std::size_t(src.height) * ow * 3);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < src.height; ++y) {
        const std::uint8_t* row = src.at(0, y);
        double* out = mid.data() + std::size_t(y) * ow * 3;
        for (int x = 0; x < ow; ++x) {
            const auto& ids = tx.idx[x];
            const auto& ws = tx.w[x];
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += ws[k] * row[3 * ids[k] + c];
                out[3 * x + c] = acc;
            }
        }
    }

    Raster out;
    out.width = ow;
    out.height = oh;
    out.pixels.resize(std::size_t(ow) * oh * 3);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < oh; ++y) {
        const auto& ids = ty.idx[y];
        const auto& ws = ty.w[y];
        std::uint8_t* dst = out.at(0, y);
        for (int x = 0; x < ow; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) {
                    acc += ws[k] * mid[(std::size_t(ids[k]) * ow + x) * 3 + c];
                }
                dst[3 * x + c] = to_byte(acc);
            }
        }
    }
    return out;
}

namespace {

bool point_on_segment(const geom::Point& p, const geom::Point& a, const geom::Point& b) {
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (std::abs(cross) > 1e-9 * std::max(1.0, std::max(std::abs(b.x - a.x), std::abs(b.y - a.y))))
        return false;
    return p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
           p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool point_in_polygon(const geom::Point& p, const std::vector<geom::Point>& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (point_on_segment(p, poly[j], poly[i])) return true;
    }
    // Even-odd crossings of a ray cast toward +x.
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& vi = poly[i];
        const auto& vj = poly[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            const double xc = (vj.x - vi.x) * (p.y - vi.y) / (vj.y - vi.y) + vi.x;
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

bool segments_intersect(const geom::Point& a, const geom::Point& b, const geom::Point& c,
                        const geom::Point& d) {
    auto orient = [](const geom::Point& p, const geom::Point& q, const geom::Point& r) {
        const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && point_on_segment(c, a, b)) || (o2 == 0 && point_on_segment(d, a, b)) ||
           (o3 == 0 && point_on_segment(a, c, d)) || (o4 == 0 && point_on_segment(b, c, d));
}

}  // namespace

bool point_in_region(const geom::Point& p, const TargetRegion& region) {
    if (region.kind == TargetRegion::Kind::Bbox) return geom::is_inside(p, region.bbox);
    if (region.polygon.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    return point_in_polygon(p, region.polygon);
}

bool region_intersects_rect(const TargetRegion& region, const geom::Rect& r) {
    const geom::Rect bb = region.bounding_rect();
    if (bb.x_max < r.x_min || bb.x_min > r.x_max || bb.y_max < r.y_min || bb.y_min > r.y_max)
        return false;
    if (region.kind == TargetRegion::Kind::Bbox) return true;

    for (const auto& v : region.polygon) {
        if (geom::is_inside(v, r)) return true;
    }
    const std::array<geom::Point, 4> corners{{{r.x_min, r.y_min},
                                              {r.x_max, r.y_min},
                                              {r.x_max, r.y_max},
                                              {r.x_min, r.y_max}}};
    for (const auto& c : corners) {
        if (point_in_region(c, region)) return true;
    }
    const std::array<std::pair<geom::Point, geom::Point>, 4> edges{
        {{corners[0], corners[1]},
         {corners[1], corners[2]},
         {corners[2], corners[3]},
         {corners[3], corners[0]}}};
    const std::size_t n = region.polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        for (const auto& [c0, c1] : edges) {
            if (segments_intersect(region.polygon[j], region.polygon[i], c0, c1)) return true;
        }
    }
    return false;
}

}  // namespace groundkit::img
