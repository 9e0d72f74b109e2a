#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "snowaug/core/geometry.hpp"

namespace snowaug {

/// Intersection area over union area; 0 for disjoint boxes.
double box_iou(const BoundingBox& a, const BoundingBox& b) noexcept;

struct MatchedPair {
    std::size_t gt = 0;
    std::size_t pred = 0;
    double iou = 0.0;
};

struct MatchResult {
    /// In selection order.
    std::vector<MatchedPair> pairs;
    std::vector<std::size_t> unmatched_gt;
    std::vector<std::size_t> unmatched_pred;
};

/// Greedy one-to-one matching: repeatedly take the highest-IoU pair among
/// unmatched boxes, provided iou > threshold (strict) and the class ids agree.
/// Ties go to the lower gt index, then the lower pred index.
MatchResult match_boxes(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred,
                        double threshold = 0.5);

/// Sum of matched IoUs over (#gt + #unmatched predictions). An image with no
/// ground truth and no predictions scores 1.
double image_iou(std::span<const BoundingBox> gt, std::span<const BoundingBox> pred, double threshold = 0.5);

/// Ground truth and predictions for one image.
struct ImageCase {
    std::string id;
    std::vector<BoundingBox> gt;
    std::vector<Detection> predictions;

    std::vector<BoundingBox> predicted_boxes() const;
};

/// Mean of image_iou over images. Throws EmptyDataset for no images.
double dataset_iou(std::span<const ImageCase> images, double threshold = 0.5);
double dataset_iou(std::span<const double> image_ious);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/// Micro-averaged over the dataset using match_boxes (confidence ignored).
/// Any 0/0 is taken as 0.
PrecisionRecall precision_recall_f1(std::span<const ImageCase> images, double threshold = 0.5);

/// All-points interpolated AP. Detections are ranked by descending
/// confidence across the whole dataset (ties keep input order) and each one
/// claims the best still-unmatched gt of its image with iou > threshold.
double average_precision(std::span<const ImageCase> images, double iou_threshold);

/// Mean AP over the given gates.
double mean_average_precision(std::span<const ImageCase> images, std::span<const double> thresholds);

/// The ten gates 0.50, 0.55, ..., 0.95, each computed as (50 + 5k) / 100.
std::vector<double> coco_thresholds();

/// mean_average_precision over coco_thresholds().
double map_range(std::span<const ImageCase> images);

}  // namespace snowaug
