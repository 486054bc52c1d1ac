#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewkit/analysis_flags.hpp"
#include "reviewkit/detect.hpp"
#include "reviewkit/geometry.hpp"

namespace reviewkit {

/// One assembled review: normalized text plus the star rating associated
/// with it by box geometry, carrying the source boxes and analysis flags.
/// stars and rating_box are present together or absent together.
struct ReviewRecord {
  std::string record_id;  // image_id + "#" + zero-padded reading-order index
  std::string image_id;
  std::optional<std::string> platform;
  std::string text;  // normalized, non-empty
  std::optional<int> stars;  // 1..5
  BoundingBox text_box;
  std::optional<BoundingBox> rating_box;
  AnalysisFlags flags;

  bool operator==(const ReviewRecord&) const = default;
};

/// rating_k maps to k stars; review_text has no star value.
std::optional<int> stars_of(ObjectClass c);

/// A review-text detection with the rating detection assigned to it, if any.
struct AssociatedPair {
  Detection text;
  std::optional<Detection> rating;

  bool operator==(const AssociatedPair&) const = default;
};

/// Assign rating boxes to review-text boxes for one image.
///
/// A rating r is a candidate for a text t when it sits above t in the
/// same column: horizontal_overlap_ratio(r, t) >= 0.5 and
/// vertical_gap(r, t) >= -height(r)/2 (half-height overlap allowed for
/// inline layouts). Candidates are ranked by |vertical_gap| ascending,
/// ties by rating x_min then text x_min, and accepted greedily with each
/// rating and each text used at most once. Every text detection appears
/// in the output exactly once, in reading order of its box; the result
/// does not depend on the input ordering.
std::vector<AssociatedPair> associate(const std::vector<Detection>& dets);

/// Build records from associated pairs and their recognized texts
/// (texts[i] belongs to pairs[i], already normalized, possibly empty).
/// Pairs with empty text are dropped; survivors are ordered by reading
/// order of the text box and numbered into record_id.
std::vector<ReviewRecord> build_records(
    const std::string& image_id, const std::optional<std::string>& platform,
    const std::vector<AssociatedPair>& pairs,
    const std::vector<std::string>& texts);

/// Drop near-duplicate records caused by the same review appearing in
/// several overlapping frames. A later record is dropped iff some kept
/// earlier record has identical stars (both absent counts as identical)
/// and token-set Jaccard similarity of the casefolded text >= jaccard_tau.
/// First occurrence wins; order is preserved.
std::vector<ReviewRecord> dedup(const std::vector<ReviewRecord>& records,
                                double jaccard_tau);

}  // namespace reviewkit
