#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snowaug/core/geometry.hpp"
#include "snowaug/dataset/dataset.hpp"
#include "snowaug/eval/metrics.hpp"

namespace snowaug {

/// Prediction file layouts.
///  - absolute: <dir>/<stem>.txt, lines "class conf x_min y_min x_max y_max" in pixels
///  - yolo:     <dir>/<stem>.txt, lines "class cx cy w h conf", normalized
///  - jsonl:    <dir>/predictions.jsonl, {"image": ..., "detections": [{x_min, y_min,
///              x_max, y_max, class_id, confidence}]}, matched to images by stem
enum class PredictionFormat { Absolute, Yolo, Jsonl };

PredictionFormat parse_prediction_format(std::string_view name);

std::vector<Detection> parse_absolute_predictions(std::istream& in, const std::string& file_name);
std::vector<Detection> parse_yolo_predictions(std::istream& in, const std::string& file_name, double image_width,
                                              double image_height);

/// Pairs every ground-truth item with its predictions. A missing prediction
/// file means the detector reported nothing for that image.
std::vector<ImageCase> load_eval_cases(std::span<const DatasetItem> gt_items, const std::filesystem::path& pred_dir,
                                       PredictionFormat format);

}  // namespace snowaug
