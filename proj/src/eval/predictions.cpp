#include "snowaug/eval/predictions.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "detail/text_util.hpp"
#include "snowaug/core/error.hpp"

namespace snowaug {

namespace fs = std::filesystem;
using nlohmann::json;

PredictionFormat parse_prediction_format(std::string_view name) {
    if (name == "absolute" || name == "abs") return PredictionFormat::Absolute;
    if (name == "yolo") return PredictionFormat::Yolo;
    if (name == "jsonl") return PredictionFormat::Jsonl;
    throw InvalidArgument("unknown prediction format '" + std::string(name) + "' (expected absolute, yolo or jsonl)");
}

namespace {

std::vector<double> parse_numbers(const std::vector<std::string_view>& fields, std::size_t from,
                                  const std::string& file, std::size_t line) {
    std::vector<double> out;
    for (std::size_t k = from; k < fields.size(); ++k) {
        const auto v = detail::parse_double(fields[k]);
        if (!v || !std::isfinite(*v)) throw ParseError(file, line, "invalid number '" + std::string(fields[k]) + "'");
        out.push_back(*v);
    }
    return out;
}

int parse_class(std::string_view field, const std::string& file, std::size_t line) {
    const auto cls = detail::parse_int<int>(field);
    if (!cls || *cls < 0) throw ParseError(file, line, "invalid class id '" + std::string(field) + "'");
    return *cls;
}

double check_confidence(double c, const std::string& file, std::size_t line) {
    if (!(c >= 0.0 && c <= 1.0)) throw ParseError(file, line, "confidence must lie in [0, 1]");
    return c;
}

}  // namespace

std::vector<Detection> parse_absolute_predictions(std::istream& in, const std::string& file_name) {
    std::vector<Detection> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto f = detail::split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 6) {
            throw ParseError(file_name, line_no, "expected 'class conf x_min y_min x_max y_max', got " +
                                                     std::to_string(f.size()) + " fields");
        }
        const int cls = parse_class(f[0], file_name, line_no);
        const auto v = parse_numbers(f, 1, file_name, line_no);
        Detection d{BoundingBox{v[1], v[2], v[3], v[4], cls}, check_confidence(v[0], file_name, line_no)};
        out.push_back(d);
    }
    return out;
}

std::vector<Detection> parse_yolo_predictions(std::istream& in, const std::string& file_name, double image_width,
                                              double image_height) {
    std::vector<Detection> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto f = detail::split_ws(line);
        if (f.empty()) continue;
        if (f.size() != 6) {
            throw ParseError(file_name, line_no,
                             "expected 'class cx cy w h conf', got " + std::to_string(f.size()) + " fields");
        }
        const int cls = parse_class(f[0], file_name, line_no);
        const auto v = parse_numbers(f, 1, file_name, line_no);
        out.push_back({from_normalized_center(cls, v[0], v[1], v[2], v[3], image_width, image_height),
                       check_confidence(v[4], file_name, line_no)});
    }
    return out;
}

namespace {

double require_number(const json& obj, const char* key, const std::string& file, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ParseError(file, line, std::string("missing numeric field '") + key + "'");
    }
    return it->get<double>();
}

std::map<std::string, std::vector<Detection>> load_jsonl_predictions(const fs::path& file) {
    std::map<std::string, std::vector<Detection>> out;
    if (!fs::exists(file)) return out;
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    const std::string name = file.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::split_ws(line).empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(name, line_no, e.what());
        }
        if (!rec.is_object() || !rec.contains("image") || !rec["image"].is_string()) {
            throw ParseError(name, line_no, "record needs a string 'image' field");
        }
        auto& dets = out[fs::path(rec["image"].get<std::string>()).stem().string()];
        if (!rec.contains("detections")) continue;
        if (!rec["detections"].is_array()) throw ParseError(name, line_no, "'detections' must be an array");
        for (const auto& d : rec["detections"]) {
            if (!d.is_object()) throw ParseError(name, line_no, "detections must be objects");
            const double cls = require_number(d, "class_id", name, line_no);
            if (cls < 0 || cls != std::floor(cls)) throw ParseError(name, line_no, "invalid class id");
            dets.push_back({BoundingBox{require_number(d, "x_min", name, line_no), require_number(d, "y_min", name, line_no),
                                        require_number(d, "x_max", name, line_no), require_number(d, "y_max", name, line_no),
                                        static_cast<int>(cls)},
                            check_confidence(require_number(d, "confidence", name, line_no), name, line_no)});
        }
    }
    return out;
}

}  // namespace

std::vector<ImageCase> load_eval_cases(std::span<const DatasetItem> gt_items, const fs::path& pred_dir,
                                       PredictionFormat format) {
    std::error_code ec;
    if (!fs::is_directory(pred_dir, ec)) throw IoError("prediction directory not found: " + pred_dir.string());

    std::map<std::string, std::vector<Detection>> jsonl;
    if (format == PredictionFormat::Jsonl) jsonl = load_jsonl_predictions(pred_dir / "predictions.jsonl");

    std::vector<ImageCase> cases;
    cases.reserve(gt_items.size());
    for (const auto& item : gt_items) {
        ImageCase c;
        c.id = item.name.empty() ? item.stem() : item.name;
        c.gt = item.annotations;
        if (format == PredictionFormat::Jsonl) {
            if (auto it = jsonl.find(item.stem()); it != jsonl.end()) c.predictions = it->second;
        } else {
            const fs::path file = pred_dir / (item.stem() + ".txt");
            if (fs::is_regular_file(file)) {
                std::ifstream in(file);
                if (!in) throw IoError("cannot open " + file.string());
                c.predictions = format == PredictionFormat::Absolute
                                    ? parse_absolute_predictions(in, file.string())
                                    : parse_yolo_predictions(in, file.string(), static_cast<double>(item.width),
                                                             static_cast<double>(item.height));
            }
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace snowaug
