#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reviewkit/geometry.hpp"
#include "reviewkit/image.hpp"

namespace reviewkit {

/// The six-class detection vocabulary: one class per star rating value
/// plus the review text block. Codes 0-5 are stable and match the
/// annotation class ids.
enum class ObjectClass : int {
  rating_1 = 0,
  rating_2 = 1,
  rating_3 = 2,
  rating_4 = 3,
  rating_5 = 4,
  review_text = 5,
};

inline constexpr int kNumClasses = 6;

const char* to_string(ObjectClass c);
std::optional<ObjectClass> class_from_string(std::string_view name);
std::optional<ObjectClass> class_from_code(int code);

/// One detected area of interest on one image.
struct Detection {
  std::string image_id;
  ObjectClass object_class = ObjectClass::review_text;
  double confidence = 0.0;  // [0, 1]
  BoundingBox box;

  bool operator==(const Detection&) const = default;
};

/// Throws ParseError when the detection violates its invariants
/// (confidence outside [0,1] or empty image_id).
void validate(const Detection& d);

/// Detector backend contract. Implementations may be model-backed or
/// file-driven fixtures; the pipeline only sees this surface.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;

  /// Zero or more detections for the image, six-class vocabulary.
  /// Throws BackendError (carrying the image_id) on failure.
  virtual std::vector<Detection> detect(const ImageRef& image) = 0;

  /// True when the backend already suppressed overlapping duplicates;
  /// the pipeline runs nms() only when this is false.
  virtual bool nms_applied() const = 0;

  /// True when detect() may be called from several threads at once.
  /// Serial backends are called under a lock by the pipeline.
  virtual bool thread_safe() const = 0;

  virtual std::string name() const = 0;
};

/// File-driven detector: resolves `<image-stem>.detections.json` beside
/// the image and returns its entries verbatim. Deterministic stand-in for
/// a model backend in tests and offline runs.
class FixtureDetector final : public DetectorBackend {
 public:
  std::vector<Detection> detect(const ImageRef& image) override;
  bool nms_applied() const override { return true; }
  bool thread_safe() const override { return true; }
  std::string name() const override { return "fixture"; }
};

/// Parse the detection interchange format: either a single JSON array or
/// newline-delimited JSON objects, each
///   {"class": "...", "confidence": c, "bbox": [x_min, y_min, x_max, y_max]}
/// Throws ParseError identifying the offending entry and field.
std::vector<Detection> parse_detection_file(const std::string& content,
                                            const std::string& image_id);

/// Canonical serialization: one compact JSON object per line.
/// parse_detection_file(serialize_detections(v), id) reproduces v.
std::string serialize_detections(const std::vector<Detection>& dets);

/// Subsequence of dets with confidence >= tau, input order preserved.
std::vector<Detection> filter_confidence(const std::vector<Detection>& dets,
                                         double tau);

/// Greedy class-wise non-maximum suppression. Per image and class,
/// detections are visited in descending confidence (ties by input order);
/// a detection is dropped when its IoU with an already kept same-class
/// detection is >= iou_tau. Never suppresses across classes: a rating
/// overlapping a text box must survive. Output keeps input order.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_tau);

}  // namespace reviewkit
