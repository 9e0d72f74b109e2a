#include "snowaug/eval/report.hpp"

#include <cstdio>

namespace snowaug {

using nlohmann::json;

json EvalReport::to_json() const {
    json images = json::array();
    for (const auto& r : per_image) {
        images.push_back({{"id", r.id}, {"iou", r.iou}, {"gt", r.gt}, {"predictions", r.predictions},
                          {"matched", r.matched}});
    }
    return json{
        {"avg_iou", avg_iou}, {"precision", precision}, {"recall", recall}, {"f1", f1},
        {"map50", map50},     {"map50_95", map50_95},   {"per_image", std::move(images)},
    };
}

std::string EvalReport::table() const {
    const std::pair<const char*, double> rows[] = {
        {"Average IOU", avg_iou}, {"mAP@50-95", map50_95}, {"mAP@50", map50}, {"Precision", precision}, {"F1 Score", f1},
    };
    std::string out = "Metric       Value\n";
    char buf[64];
    for (const auto& [name, value] : rows) {
        std::snprintf(buf, sizeof buf, "%-12s %.4f\n", name, value);
        out += buf;
    }
    return out;
}

EvalReport evaluate(std::span<const ImageCase> images, double threshold) {
    EvalReport report;
    std::vector<double> ious;
    for (const auto& im : images) {
        const auto preds = im.predicted_boxes();
        const auto m = match_boxes(im.gt, preds, threshold);
        const double iou = image_iou(im.gt, preds, threshold);
        ious.push_back(iou);
        report.per_image.push_back({im.id, iou, im.gt.size(), preds.size(), m.pairs.size()});
    }
    if (!images.empty()) report.avg_iou = dataset_iou(ious);
    const auto pr = precision_recall_f1(images, threshold);
    report.precision = pr.precision;
    report.recall = pr.recall;
    report.f1 = pr.f1;
    const double gate50[] = {0.5};
    report.map50 = mean_average_precision(images, gate50);
    report.map50_95 = map_range(images);
    return report;
}

}  // namespace snowaug
