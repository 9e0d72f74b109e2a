#include "snowaug/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "snowaug/core/error.hpp"

namespace snowaug {

double box_iou(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_boxes(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred, double threshold) {
    std::vector<MatchedPair> candidates;
    for (std::size_t g = 0; g < gt.size(); ++g) {
        for (std::size_t p = 0; p < pred.size(); ++p) {
            if (gt[g].class_id != pred[p].class_id) continue;
            const double iou = box_iou(gt[g], pred[p]);
            if (iou > threshold) candidates.push_back({g, p, iou});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const MatchedPair& a, const MatchedPair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.gt != b.gt) return a.gt < b.gt;
        return a.pred < b.pred;
    });

    MatchResult result;
    std::vector<bool> gt_used(gt.size(), false);
    std::vector<bool> pred_used(pred.size(), false);
    for (const auto& c : candidates) {
        if (gt_used[c.gt] || pred_used[c.pred]) continue;
        gt_used[c.gt] = true;
        pred_used[c.pred] = true;
        result.pairs.push_back(c);
    }
    for (std::size_t g = 0; g < gt.size(); ++g) {
        if (!gt_used[g]) result.unmatched_gt.push_back(g);
    }
    for (std::size_t p = 0; p < pred.size(); ++p) {
        if (!pred_used[p]) result.unmatched_pred.push_back(p);
    }
    return result;
}

double image_iou(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred, double threshold) {
    if (gt.empty() && pred.empty()) return 1.0;
    const auto m = match_boxes(gt, pred, threshold);
    double sum = 0.0;
    for (const auto& p : m.pairs) sum += p.iou;
    return sum / static_cast<double>(gt.size() + m.unmatched_pred.size());
}

std::vector<BoundingBox> ImageCase::predicted_boxes() const {
    std::vector<BoundingBox> out;
    out.reserve(predictions.size());
    for (const auto& d : predictions) out.push_back(d.box);
    return out;
}

double dataset_iou(std::span<const double> image_ious) {
    if (image_ious.empty()) throw EmptyDataset("dataset IoU needs at least one image");
    return std::accumulate(image_ious.begin(), image_ious.end(), 0.0) / static_cast<double>(image_ious.size());
}

double dataset_iou(std::span<const ImageCase> images, double threshold) {
    std::vector<double> ious;
    ious.reserve(images.size());
    for (const auto& im : images) ious.push_back(image_iou(im.gt, im.predicted_boxes(), threshold));
    return dataset_iou(ious);
}

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

PrecisionRecall precision_recall_f1(std::span<const ImageCase> images, double threshold) {
    PrecisionRecall out;
    for (const auto& im : images) {
        const auto m = match_boxes(im.gt, im.predicted_boxes(), threshold);
        out.tp += m.pairs.size();
        out.fp += m.unmatched_pred.size();
        out.fn += m.unmatched_gt.size();
    }
    const auto tp = static_cast<double>(out.tp);
    out.precision = safe_ratio(tp, tp + static_cast<double>(out.fp));
    out.recall = safe_ratio(tp, tp + static_cast<double>(out.fn));
    out.f1 = safe_ratio(2.0 * out.precision * out.recall, out.precision + out.recall);
    return out;
}

double average_precision(std::span<const ImageCase> images, double iou_threshold) {
    struct Ranked {
        double confidence;
        std::size_t image;
        std::size_t det;
    };
    std::vector<Ranked> ranked;
    std::size_t total_gt = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        total_gt += images[i].gt.size();
        for (std::size_t d = 0; d < images[i].predictions.size(); ++d) {
            ranked.push_back({images[i].predictions[d].confidence, i, d});
        }
    }
    if (total_gt == 0 || ranked.empty()) return 0.0;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.confidence > b.confidence; });

    std::vector<std::vector<bool>> claimed(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) claimed[i].assign(images[i].gt.size(), false);

    std::vector<double> precision(ranked.size());
    std::vector<double> recall(ranked.size());
    std::size_t tp = 0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        const auto& im = images[ranked[r].image];
        const auto& box = im.predictions[ranked[r].det].box;
        double best = iou_threshold;
        std::size_t best_gt = im.gt.size();
        for (std::size_t g = 0; g < im.gt.size(); ++g) {
            if (claimed[ranked[r].image][g] || im.gt[g].class_id != box.class_id) continue;
            const double iou = box_iou(im.gt[g], box);
            if (iou > best) {
                best = iou;
                best_gt = g;
            }
        }
        if (best_gt < im.gt.size()) {
            claimed[ranked[r].image][best_gt] = true;
            ++tp;
        }
        precision[r] = static_cast<double>(tp) / static_cast<double>(r + 1);
        recall[r] = static_cast<double>(tp) / static_cast<double>(total_gt);
    }

    // Precision envelope: the best precision at any recall at least as high.
    for (std::size_t r = ranked.size() - 1; r-- > 0;) precision[r] = std::max(precision[r], precision[r + 1]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        ap += (recall[r] - prev_recall) * precision[r];
        prev_recall = recall[r];
    }
    return ap;
}

double mean_average_precision(std::span<const ImageCase> images, std::span<const double> thresholds) {
    if (thresholds.empty()) return 0.0;
    double sum = 0.0;
    for (double t : thresholds) sum += average_precision(images, t);
    return sum / static_cast<double>(thresholds.size());
}

std::vector<double> coco_thresholds() {
    std::vector<double> t;
    for (int k = 0; k < 10; ++k) t.push_back(static_cast<double>(50 + 5 * k) / 100.0);
    return t;
}

double map_range(std::span<const ImageCase> images) {
    const auto t = coco_thresholds();
    return mean_average_precision(images, t);
}

}  // namespace snowaug
