#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "snowaug/eval/metrics.hpp"

namespace snowaug {

struct ImageReport {
    std::string id;
    double iou = 0.0;
    std::size_t gt = 0;
    std::size_t predictions = 0;
    std::size_t matched = 0;
};

struct EvalReport {
    double avg_iou = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double map50 = 0.0;
    double map50_95 = 0.0;
    std::vector<ImageReport> per_image;

    nlohmann::json to_json() const;
    /// Five rows: Average IOU, mAP@50-95, mAP@50, Precision, F1 Score.
    std::string table() const;
};

EvalReport evaluate(std::span<const ImageCase> images, double threshold = 0.5);

}  // namespace snowaug
