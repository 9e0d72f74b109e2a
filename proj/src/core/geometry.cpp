#include "snowaug/core/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "snowaug/core/error.hpp"

namespace snowaug {

BoundingBox clamp_box(const BoundingBox& box, double width, double height) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw InvalidArgument("clamp_box: image extent must be positive");
    }
    BoundingBox out = box;
    out.x_min = std::clamp(box.x_min, 0.0, width);
    out.x_max = std::clamp(box.x_max, 0.0, width);
    out.y_min = std::clamp(box.y_min, 0.0, height);
    out.y_max = std::clamp(box.y_max, 0.0, height);
    if (!out.valid()) {
        std::ostringstream msg;
        msg << "box (" << box.x_min << ", " << box.y_min << ", " << box.x_max << ", " << box.y_max
            << ") has no area inside " << width << "x" << height;
        throw DegenerateBox(msg.str());
    }
    return out;
}

BoundingBox from_normalized_center(int class_id, double cx, double cy, double w, double h,
                                   double image_width, double image_height) noexcept {
    return BoundingBox{
        (cx - w / 2.0) * image_width,
        (cy - h / 2.0) * image_height,
        (cx + w / 2.0) * image_width,
        (cy + h / 2.0) * image_height,
        class_id,
    };
}

NormalizedCenter to_normalized_center(const BoundingBox& box, double image_width,
                                      double image_height) noexcept {
    return NormalizedCenter{
        (box.x_min + box.x_max) / 2.0 / image_width,
        (box.y_min + box.y_max) / 2.0 / image_height,
        box.width() / image_width,
        box.height() / image_height,
    };
}

}  // namespace snowaug
