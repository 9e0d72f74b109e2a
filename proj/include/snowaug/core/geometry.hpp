#pragma once

#include <cstddef>

namespace snowaug {

/// Axis-aligned box in absolute pixel corner coordinates.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    int class_id = 0;

    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
    double area() const noexcept { return width() * height(); }
    bool valid() const noexcept { return x_min < x_max && y_min < y_max; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
    BoundingBox box;
    double confidence = 1.0;
};

/// Clips a box to [0,width]x[0,height]. Throws DegenerateBox when nothing of
/// positive area remains, InvalidArgument for a zero extent.
BoundingBox clamp_box(const BoundingBox& box, double width, double height);

/// Converts YOLO normalized center format to corner pixels.
BoundingBox from_normalized_center(int class_id, double cx, double cy, double w, double h,
                                   double image_width, double image_height) noexcept;

struct NormalizedCenter {
    double cx, cy, w, h;
};
NormalizedCenter to_normalized_center(const BoundingBox& box, double image_width,
                                      double image_height) noexcept;

}  // namespace snowaug
