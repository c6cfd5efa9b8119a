#pragma once

#include <cmath>
#include <stdexcept>

namespace groundkit::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

// Axis-aligned rectangle in global image coordinates. Boundaries are
// real-valued; snapping to the pixel grid happens only at crop time.
struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    Point center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
    bool valid() const { return x_min < x_max && y_min < y_max; }

    bool operator==(const Rect&) const = default;
};

struct ImageBounds {
    int width = 0;
    int height = 0;

    bool valid() const { return width > 0 && height > 0; }
    Rect as_rect() const { return {0.0, 0.0, double(width), double(height)}; }
};

double euclidean_dist(const Point& a, const Point& b);

// Size proxy of a rectangle: the larger of its two side lengths.
double get_area(const Rect& r);

// Boundary-inclusive membership test.
bool is_inside(const Point& p, const Rect& r);

// Shrinks each axis by factor (1 - delta_in), moving only the boundary
// farther from p. Equidistant boundaries break ties toward the
// max-coordinate side. Requires is_inside(p, r) and 0 < delta_in < 1;
// violations throw std::invalid_argument.
Rect zoom_in_asymmetric(const Rect& r, const Point& p, double delta_in);

// Shrinks each axis by factor (1 - delta_in), split evenly per side, so
// the center is preserved.
Rect zoom_in_symmetric(const Rect& r, double delta_in);

// Grows each axis by factor (1 + delta_out), split evenly per side, then
// clamps every boundary into the image.
Rect zoom_out(const Rect& r, double delta_out, const ImageBounds& bounds);

// side x side square centered at c, translated (never shrunk) to fit the
// image; an axis where side exceeds the image spans the full image.
Rect center_square(const Point& c, double side, const ImageBounds& bounds);

Point clamp_point(const Point& p, const Rect& r);

// Outward snap of r to the integer pixel grid, intersected with the image.
// Returns an invalid rect when the intersection is empty.
Rect grid_crop_rect(const Rect& r, const ImageBounds& bounds);

}  // namespace groundkit::geom
