#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snowaug/core/geometry.hpp"
#include "snowaug/core/image.hpp"

namespace snowaug {

/// On-disk annotation layouts. Both keep rasters under <root>/images/.
///  - yolo:  <root>/labels/<stem>.txt, lines "class cx cy w h" (normalized)
///  - jsonl: <root>/annotations.jsonl, one object per image:
///           {"image": "images/a.png", "width": W, "height": H,
///            "boxes": [{"x_min":..,"y_min":..,"x_max":..,"y_max":..,"class_id":..}]}
enum class AnnotationFormat { Yolo, Jsonl };

/// Accepts "yolo", "yolo-txt" and "jsonl". Throws InvalidArgument otherwise.
AnnotationFormat parse_annotation_format(std::string_view name);
std::string_view format_name(AnnotationFormat format) noexcept;

struct DatasetItem {
    std::filesystem::path image_path;
    /// image_path relative to the dataset root, generic separators.
    std::string name;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<BoundingBox> annotations;

    std::string stem() const { return image_path.stem().string(); }
};

struct LoadedDataset {
    std::vector<DatasetItem> items;
    /// Boxes discarded because clamping left no area.
    std::size_t dropped_boxes = 0;
};

/// Items come back sorted by relative image path, which fixes the item index
/// used for seed derivation. Throws MissingAnnotation, ParseError or IoError.
LoadedDataset load_dataset(const std::filesystem::path& root, AnnotationFormat format);

/// Parses a YOLO label stream for an image of the given size. Out-of-frame
/// boxes are clamped; boxes with no remaining area are counted in `dropped`.
std::vector<BoundingBox> parse_yolo_labels(std::istream& in, const std::string& file_name, double image_width,
                                           double image_height, std::size_t& dropped);
std::string format_yolo_labels(std::span<const BoundingBox> boxes, double image_width, double image_height);

/// One jsonl annotation line (no trailing newline).
std::string format_jsonl_record(std::string_view image_name, std::size_t width, std::size_t height,
                                std::span<const BoundingBox> boxes);

struct ResizedItem {
    ImageBuffer image;
    std::vector<BoundingBox> boxes;
    /// Indices (into item.annotations) of boxes that shrank below one pixel
    /// and were left out of `boxes`.
    std::vector<std::size_t> degenerate;
};

ResizedItem resize_with_annotations(const DatasetItem& item, const ImageBuffer& image, std::size_t width,
                                    std::size_t height);

/// Writes images as PNG plus annotations in the requested layout. Returns the
/// number of items written.
std::size_t write_dataset(std::span<const DatasetItem> items, std::span<const ImageBuffer> images,
                          std::span<const std::vector<BoundingBox>> boxes, AnnotationFormat format,
                          const std::filesystem::path& out);

}  // namespace snowaug
