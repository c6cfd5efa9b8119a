#include "groundkit/geometry.hpp"

#include <algorithm>

namespace groundkit::geom {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double euclidean_dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double get_area(const Rect& r) {
    return std::max(r.width(), r.height());
}

bool is_inside(const Point& p, const Rect& r) {
    return r.x_min <= p.x && p.x <= r.x_max && r.y_min <= p.y && p.y <= r.y_max;
}

Rect zoom_in_asymmetric(const Rect& r, const Point& p, double delta_in) {
    require(r.valid(), "zoom_in_asymmetric: invalid rect");
    require(delta_in > 0.0 && delta_in < 1.0, "zoom_in_asymmetric: delta_in out of (0,1)");
    require(is_inside(p, r), "zoom_in_asymmetric: point outside rect");

    Rect out = r;
    // Per axis, move the boundary farther from p inward by delta_in * length.
    // Ties move the max-coordinate boundary.
    const double dxw = r.width() * delta_in;
    if (p.x - r.x_min > r.x_max - p.x) {
        out.x_min += dxw;
    } else {
        out.x_max -= dxw;
    }
    const double dyw = r.height() * delta_in;
    if (p.y - r.y_min > r.y_max - p.y) {
        out.y_min += dyw;
    } else {
        out.y_max -= dyw;
    }
    return out;
}

Rect zoom_in_symmetric(const Rect& r, double delta_in) {
    require(r.valid(), "zoom_in_symmetric: invalid rect");
    require(delta_in > 0.0 && delta_in < 1.0, "zoom_in_symmetric: delta_in out of (0,1)");

    const double sx = r.width() * delta_in / 2.0;
    const double sy = r.height() * delta_in / 2.0;
    return {r.x_min + sx, r.y_min + sy, r.x_max - sx, r.y_max - sy};
}

Rect zoom_out(const Rect& r, double delta_out, const ImageBounds& bounds) {
    require(r.valid(), "zoom_out: invalid rect");
    require(delta_out > 0.0 && delta_out < 1.0, "zoom_out: delta_out out of (0,1)");
    require(bounds.valid(), "zoom_out: invalid bounds");

    const double gx = r.width() * delta_out / 2.0;
    const double gy = r.height() * delta_out / 2.0;
    Rect out{r.x_min - gx, r.y_min - gy, r.x_max + gx, r.y_max + gy};
    out.x_min = std::clamp(out.x_min, 0.0, double(bounds.width));
    out.x_max = std::clamp(out.x_max, 0.0, double(bounds.width));
    out.y_min = std::clamp(out.y_min, 0.0, double(bounds.height));
    out.y_max = std::clamp(out.y_max, 0.0, double(bounds.height));
    return out;
}

namespace {

// One axis of center_square: [c-side/2, c+side/2] translated into [0, limit],
// spanning the whole axis when side >= limit.
std::pair<double, double> centered_span(double c, double side, double limit) {
    if (side >= limit) return {0.0, limit};
    double lo = c - side / 2.0;
    if (lo < 0.0) lo = 0.0;
    if (lo + side > limit) lo = limit - side;
    return {lo, lo + side};
}

}  // namespace

Rect center_square(const Point& c, double side, const ImageBounds& bounds) {
    require(side > 0.0, "center_square: side must be positive");
    require(bounds.valid(), "center_square: invalid bounds");

    auto [x0, x1] = centered_span(c.x, side, double(bounds.width));
    auto [y0, y1] = centered_span(c.y, side, double(bounds.height));
    return {x0, y0, x1, y1};
}

Point clamp_point(const Point& p, const Rect& r) {
    return {std::clamp(p.x, r.x_min, r.x_max), std::clamp(p.y, r.y_min, r.y_max)};
}

Rect grid_crop_rect(const Rect& r, const ImageBounds& bounds) {
    double x0 = std::floor(r.x_min);
    double y0 = std::floor(r.y_min);
    double x1 = std::ceil(r.x_max);
    double y1 = std::ceil(r.y_max);
    x0 = std::max(x0, 0.0);
    y0 = std::max(y0, 0.0);
    x1 = std::min(x1, double(bounds.width));
    y1 = std::min(y1, double(bounds.height));
    return {x0, y0, x1, y1};
}

}  // namespace groundkit::geom
