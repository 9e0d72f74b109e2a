#include "snowaug/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "snowaug/core/error.hpp"
#include "snowaug/core/image_io.hpp"
#include "detail/text_util.hpp"

namespace snowaug {

namespace fs = std::filesystem;
using nlohmann::json;

AnnotationFormat parse_annotation_format(std::string_view name) {
    if (name == "yolo" || name == "yolo-txt") return AnnotationFormat::Yolo;
    if (name == "jsonl") return AnnotationFormat::Jsonl;
    throw InvalidArgument("unknown annotation format '" + std::string(name) + "' (expected yolo or jsonl)");
}

std::string_view format_name(AnnotationFormat format) noexcept {
    return format == AnnotationFormat::Yolo ? "yolo" : "jsonl";
}

std::vector<BoundingBox> parse_yolo_labels(std::istream& in, const std::string& file_name, double image_width,
                                           double image_height, std::size_t& dropped) {
    std::vector<BoundingBox> boxes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 5) {
            throw ParseError(file_name, line_no,
                             "expected 5 fields 'class cx cy w h', got " + std::to_string(fields.size()));
        }
        const auto cls = detail::parse_int<int>(fields[0]);
        if (!cls || *cls < 0) throw ParseError(file_name, line_no, "invalid class id '" + std::string(fields[0]) + "'");
        double v[4];
        for (int k = 0; k < 4; ++k) {
            const auto d = detail::parse_double(fields[static_cast<std::size_t>(k + 1)]);
            if (!d || !std::isfinite(*d)) {
                throw ParseError(file_name, line_no, "invalid number '" + std::string(fields[static_cast<std::size_t>(k + 1)]) + "'");
            }
            v[k] = *d;
        }
        const auto raw = from_normalized_center(*cls, v[0], v[1], v[2], v[3], image_width, image_height);
        try {
            boxes.push_back(clamp_box(raw, image_width, image_height));
        } catch (const DegenerateBox&) {
            ++dropped;
        }
    }
    return boxes;
}

std::string format_yolo_labels(std::span<const BoundingBox> boxes, double image_width, double image_height) {
    std::string out;
    char buf[160];
    for (const auto& b : boxes) {
        const auto n = to_normalized_center(b, image_width, image_height);
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", b.class_id, n.cx, n.cy, n.w, n.h);
        out += buf;
    }
    return out;
}

std::string format_jsonl_record(std::string_view image_name, std::size_t width, std::size_t height,
                                std::span<const BoundingBox> boxes) {
    json boxes_json = json::array();
    for (const auto& b : boxes) {
        boxes_json.push_back({{"x_min", b.x_min}, {"y_min", b.y_min}, {"x_max", b.x_max}, {"y_max", b.y_max},
                              {"class_id", b.class_id}});
    }
    json record = {{"image", std::string(image_name)}, {"width", width}, {"height", height}, {"boxes", boxes_json}};
    return record.dump();
}

namespace {

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("missing image directory " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_unique_stems(const std::vector<fs::path>& images) {
    std::set<std::string> seen;
    for (const auto& p : images) {
        if (!seen.insert(p.stem().string()).second) {
            throw IoError("two images share the stem '" + p.stem().string() + "' in " + p.parent_path().string());
        }
    }
}

LoadedDataset load_yolo(const fs::path& root) {
    LoadedDataset ds;
    const auto images = list_images(root / "images");
    check_unique_stems(images);
    for (const auto& img : images) {
        const fs::path label = root / "labels" / (img.stem().string() + ".txt");
        if (!fs::is_regular_file(label)) {
            throw MissingAnnotation("no label file " + label.string() + " for image " + img.string());
        }
        const auto size = probe_image_size(img);
        DatasetItem item;
        item.image_path = img;
        item.name = fs::relative(img, root).generic_string();
        item.width = size.width;
        item.height = size.height;
        std::ifstream in(label);
        if (!in) throw IoError("cannot open " + label.string());
        item.annotations = parse_yolo_labels(in, label.string(), static_cast<double>(size.width),
                                             static_cast<double>(size.height), ds.dropped_boxes);
        ds.items.push_back(std::move(item));
    }
    return ds;
}

double require_number(const json& obj, const char* key, const std::string& file, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(file, line, std::string("missing numeric field '") + key + "'");
    }
    return it->get<double>();
}

LoadedDataset load_jsonl(const fs::path& root) {
    LoadedDataset ds;
    const fs::path index = root / "annotations.jsonl";
    const std::string index_name = index.string();
    if (!fs::is_regular_file(index)) throw MissingAnnotation("missing annotation index " + index_name);
    std::ifstream in(index);
    if (!in) throw IoError("cannot open " + index_name);

    std::map<std::string, DatasetItem> by_name;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::split_ws(line).empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(index_name, line_no, e.what());
        }
        if (!rec.is_object() || !rec.contains("image") || !rec["image"].is_string()) {
            throw ParseError(index_name, line_no, "record needs a string 'image' field");
        }
        DatasetItem item;
        item.name = fs::path(rec["image"].get<std::string>()).lexically_normal().generic_string();
        item.image_path = root / item.name;
        const double w = require_number(rec, "width", index_name, line_no);
        const double h = require_number(rec, "height", index_name, line_no);
        if (!(w >= 1.0) || !(h >= 1.0)) throw ParseError(index_name, line_no, "width and height must be positive");
        item.width = static_cast<std::size_t>(w);
        item.height = static_cast<std::size_t>(h);
        if (!fs::is_regular_file(item.image_path)) {
            throw ParseError(index_name, line_no, "image not found: " + item.image_path.string());
        }
        if (rec.contains("boxes")) {
            if (!rec["boxes"].is_array()) throw ParseError(index_name, line_no, "'boxes' must be an array");
            for (const auto& b : rec["boxes"]) {
                if (!b.is_object()) throw ParseError(index_name, line_no, "box entries must be objects");
                BoundingBox box{require_number(b, "x_min", index_name, line_no),
                                require_number(b, "y_min", index_name, line_no),
                                require_number(b, "x_max", index_name, line_no),
                                require_number(b, "y_max", index_name, line_no),
                                static_cast<int>(require_number(b, "class_id", index_name, line_no))};
                try {
                    item.annotations.push_back(clamp_box(box, w, h));
                } catch (const DegenerateBox&) {
                    ++ds.dropped_boxes;
                }
            }
        }
        const std::string key = item.name;
        if (!by_name.emplace(key, std::move(item)).second) {
            throw ParseError(index_name, line_no, "duplicate record for " + key);
        }
    }

    std::error_code ec;
    if (fs::is_directory(root / "images", ec)) {
        for (const auto& img : list_images(root / "images")) {
            const auto name = fs::relative(img, root).generic_string();
            if (!by_name.count(name)) throw MissingAnnotation("no annotation record for image " + img.string());
        }
    }
    for (auto& [name, item] : by_name) ds.items.push_back(std::move(item));
    return ds;
}

}  // namespace

LoadedDataset load_dataset(const fs::path& root, AnnotationFormat format) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("dataset root is not a readable directory: " + root.string());
    return format == AnnotationFormat::Yolo ? load_yolo(root) : load_jsonl(root);
}

ResizedItem resize_with_annotations(const DatasetItem& item, const ImageBuffer& image, std::size_t width,
                                    std::size_t height) {
    if (width == 0 || height == 0) throw InvalidArgument("resize target must be positive");
    ResizedItem out;
    out.image = resize_bilinear(image, width, height);
    const double sx = static_cast<double>(width) / static_cast<double>(image.width());
    const double sy = static_cast<double>(height) / static_cast<double>(image.height());
    for (std::size_t i = 0; i < item.annotations.size(); ++i) {
        const auto& b = item.annotations[i];
        BoundingBox scaled{b.x_min * sx, b.y_min * sy, b.x_max * sx, b.y_max * sy, b.class_id};
        try {
            scaled = clamp_box(scaled, static_cast<double>(width), static_cast<double>(height));
        } catch (const DegenerateBox&) {
            out.degenerate.push_back(i);
            continue;
        }
        if (scaled.width() < 1.0 || scaled.height() < 1.0) {
            out.degenerate.push_back(i);
            continue;
        }
        out.boxes.push_back(scaled);
    }
    return out;
}

std::size_t write_dataset(std::span<const DatasetItem> items, std::span<const ImageBuffer> images,
                          std::span<const std::vector<BoundingBox>> boxes, AnnotationFormat format,
                          const fs::path& out) {
    if (images.size() != items.size() || boxes.size() != items.size()) {
        throw DimensionMismatch("write_dataset: items, images and boxes differ in length");
    }
    std::error_code ec;
    fs::create_directories(out / "images", ec);
    if (ec) throw IoError("cannot create " + (out / "images").string() + ": " + ec.message());
    if (format == AnnotationFormat::Yolo) {
        fs::create_directories(out / "labels", ec);
        if (ec) throw IoError("cannot create " + (out / "labels").string() + ": " + ec.message());
    }

    std::string index;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& img = images[i];
        const std::string file = items[i].stem() + ".png";
        write_png(out / "images" / file, img);
        const auto w = static_cast<double>(img.width());
        const auto h = static_cast<double>(img.height());
        if (format == AnnotationFormat::Yolo) {
            const auto text = format_yolo_labels(boxes[i], w, h);
            const fs::path label = out / "labels" / (items[i].stem() + ".txt");
            write_file_bytes(label, std::vector<std::uint8_t>(text.begin(), text.end()));
        } else {
            index += format_jsonl_record("images/" + file, img.width(), img.height(), boxes[i]);
            index += '\n';
        }
    }
    if (format == AnnotationFormat::Jsonl) {
        write_file_bytes(out / "annotations.jsonl", std::vector<std::uint8_t>(index.begin(), index.end()));
    }
    return items.size();
}

}  // namespace snowaug
