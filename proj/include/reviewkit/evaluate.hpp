#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reviewkit/detect.hpp"
#include "reviewkit/geometry.hpp"

namespace reviewkit {

/// One annotated box parsed from a YOLO-format ground-truth file.
struct GroundTruthBox {
  std::string image_id;
  ObjectClass object_class = ObjectClass::review_text;
  BoundingBox box;

  bool operator==(const GroundTruthBox&) const = default;
};

/// Parse one YOLO annotation line `<class_id> <cx> <cy> <w> <h>`
/// (normalized center/size floats in [0,1]) into pixel coordinates for an
/// image of image_w x image_h. Throws ParseError on malformed lines,
/// class ids outside 0..5, and boxes that leave the image.
GroundTruthBox parse_yolo_line(const std::string& line,
                               const std::string& image_id, int image_w,
                               int image_h);

/// TP/FP decision for one prediction, in confidence-descending rank order.
struct MatchDecision {
  std::size_t pred_index;  // into the preds argument
  bool is_tp = false;
};

struct MatchResult {
  std::vector<MatchDecision> decisions;  // one per prediction, ranked
  int fn = 0;                            // ground truths left unmatched
};

/// Greedy detection-to-ground-truth matching. Predictions are visited in
/// descending confidence (ties by input order); each one claims the
/// still-unmatched same-class, same-image ground truth of maximal IoU
/// when that IoU >= iou_tau, and counts as FP otherwise.
MatchResult match(const std::vector<Detection>& preds,
                  const std::vector<GroundTruthBox>& gts, double iou_tau);

struct PrecisionResult {
  double precision = 1.0;  // TP/(TP+FP); 1.0 when no predictions were made
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

/// Review-text detection precision: restrict both sides to review_text,
/// drop predictions below conf_tau, match at iou_tau, return TP/(TP+FP).
PrecisionResult precision_review_text(const std::vector<Detection>& preds,
                                      const std::vector<GroundTruthBox>& gts,
                                      double conf_tau = 0.8,
                                      double iou_tau = 0.8);

/// 101-point interpolated average precision for one class at one IoU
/// threshold: mean over recall points {0.00, 0.01, ..., 1.00} of the
/// maximum precision achieved at or beyond each point. Returns nullopt
/// when the class has no ground-truth instances (excluded from mAP).
std::optional<double> average_precision(const std::vector<Detection>& preds,
                                        const std::vector<GroundTruthBox>& gts,
                                        ObjectClass object_class,
                                        double iou_tau);

/// The standard IoU threshold sweep 0.50, 0.55, ..., 0.95.
const std::vector<double>& iou_sweep();

/// Mean average precision: per class present in the ground truth, AP is
/// averaged over the IoU sweep; mAP is the mean of those per-class values.
/// 0.0 when the ground truth is empty.
double mean_ap(const std::vector<Detection>& preds,
               const std::vector<GroundTruthBox>& gts);

struct EvaluationSettings {
  double conf_threshold = 0.8;     // confidence cut for review-text precision
  double precision_iou = 0.8;      // IoU threshold for review-text precision
  double map_conf_threshold = 0.0; // confidence cut before AP/mAP (0 = none)
  std::vector<double> iou_thresholds = iou_sweep();

  bool operator==(const EvaluationSettings&) const = default;
};

struct EvaluationReport {
  double map_score = 0.0;
  // class name -> threshold key ("0.50" ... "0.95") -> AP
  std::map<std::string, std::map<std::string, double>> per_class_ap;
  double review_text_precision = 1.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  EvaluationSettings settings;

  bool operator==(const EvaluationReport&) const = default;
};

/// Two-decimal key for a sweep threshold, e.g. 0.5 -> "0.50".
std::string threshold_key(double tau);

/// Compute the full report: mAP, per-class AP across the sweep, and the
/// review-text precision at the configured thresholds.
EvaluationReport evaluate_detections(const std::vector<Detection>& preds,
                                     const std::vector<GroundTruthBox>& gts,
                                     const EvaluationSettings& settings = {});

/// JSON document with fixed keys: map, per_class_ap,
/// precision_review_text, tp, fp, fn, settings. Round-trips losslessly.
std::string serialize_report(const EvaluationReport& report);
EvaluationReport parse_report(const std::string& content);

}  // namespace reviewkit
