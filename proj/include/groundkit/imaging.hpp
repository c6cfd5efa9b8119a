#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "groundkit/geometry.hpp"

namespace groundkit::img {

// Interleaved RGB8 raster.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    static Raster filled(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    std::uint8_t* at(int x, int y) { return pixels.data() + 3 * (std::size_t(y) * width + x); }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (std::size_t(y) * width + x);
    }
    geom::ImageBounds bounds() const { return {width, height}; }

    bool operator==(const Raster&) const = default;
};

// Ground-truth annotation: a bounding box or a (possibly self-intersecting)
// polygon evaluated under the even-odd rule.
struct TargetRegion {
    enum class Kind { Bbox, Polygon };
    Kind kind = Kind::Bbox;
    geom::Rect bbox;
    std::vector<geom::Point> polygon;

    static TargetRegion from_bbox(const geom::Rect& r) { return {Kind::Bbox, r, {}}; }
    static TargetRegion from_polygon(std::vector<geom::Point> pts);

    // Clickable reference point: bbox center, or the area centroid of the
    // polygon (vertex mean when the signed area degenerates).
    geom::Point center() const;
    geom::Rect bounding_rect() const;
};

// Extracts r snapped outward to the pixel grid and clipped to the image.
// Throws std::invalid_argument when the intersection is empty.
Raster crop(const Raster& src, const geom::Rect& r);

// Bicubic upscale by an integer factor using the Catmull-Rom kernel
// (a = -0.5). Factor 1 is the identity. Parallelized over output rows.
Raster upscale_bicubic(const Raster& src, int factor);

// Boundary-inclusive membership: bbox uses is_inside, polygons use even-odd
// ray casting with points on an edge counted inside. Polygons need >= 3
// vertices.
bool point_in_region(const geom::Point& p, const TargetRegion& region);

// True when region and r overlap at all (used by the any-overlap containment
// option).
bool region_intersects_rect(const TargetRegion& region, const geom::Rect& r);

// PNG wire/disk codec.
Raster decode_png(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_png(const Raster& img);
Raster load_png(const std::string& path);
void save_png(const Raster& img, const std::string& path);

}  // namespace groundkit::img
