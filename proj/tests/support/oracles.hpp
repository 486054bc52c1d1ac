// Reference implementations used to cross-check the library. Everything
// here is deliberately naive — literal enumeration over definitions — and
// shares no code with the implementations under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "reviewkit/detect.hpp"
#include "reviewkit/evaluate.hpp"
#include "reviewkit/geometry.hpp"

namespace oracle {

// Intersection over union restated from the formula, kept in canonical
// operand order so results are bit-comparable with any faithful
// implementation of the same formula.
inline double iou_ref(const reviewkit::BoundingBox& a,
                      const reviewkit::BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x_max, b.x_max) -
                                      std::max(a.x_min, b.x_min));
  const double iy = std::max(0.0, std::min(a.y_max, b.y_max) -
                                      std::max(a.y_min, b.y_min));
  const double inter = ix * iy;
  const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
  const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// IoU of two integer-cornered boxes by literally counting unit grid
// cells. Integer counts up to ~1e8 are exact in double, so the final
// division matches the continuous formula bit for bit.
inline double cell_counting_iou(int ax0, int ay0, int ax1, int ay1, int bx0,
                                int by0, int bx1, int by1) {
  std::int64_t cells_a = 0, cells_b = 0, cells_both = 0;
  const int x_lo = std::min(ax0, bx0), x_hi = std::max(ax1, bx1);
  const int y_lo = std::min(ay0, by0), y_hi = std::max(ay1, by1);
  for (int x = x_lo; x < x_hi; ++x) {
    for (int y = y_lo; y < y_hi; ++y) {
      const bool in_a = x >= ax0 && x < ax1 && y >= ay0 && y < ay1;
      const bool in_b = x >= bx0 && x < bx1 && y >= by0 && y < by1;
      cells_a += in_a;
      cells_b += in_b;
      cells_both += in_a && in_b;
    }
  }
  const std::int64_t uni = cells_a + cells_b - cells_both;
  if (uni == 0) return 0.0;
  return static_cast<double>(cells_both) / static_cast<double>(uni);
}

// One ranked TP/FP decision stream plus the leftover ground-truth count,
// re-derived by explicit enumeration.
struct NaiveMatch {
  std::vector<std::pair<std::size_t, bool>> decisions;  // (pred index, tp)
  int fn = 0;
};

inline NaiveMatch naive_match(const std::vector<reviewkit::Detection>& preds,
                              const std::vector<reviewkit::GroundTruthBox>& gts,
                              double iou_tau) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&preds](std::size_t i, std::size_t j) {
                     return preds[i].confidence > preds[j].confidence;
                   });

  NaiveMatch out;
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t idx : order) {
    double best = 0.0;
    std::size_t best_g = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].object_class != preds[idx].object_class ||
          gts[g].image_id != preds[idx].image_id) {
        continue;
      }
      const double overlap = iou_ref(preds[idx].box, gts[g].box);
      if (overlap > best) {
        best = overlap;
        best_g = g;
      }
    }
    const bool tp = best_g < gts.size() && best >= iou_tau;
    if (tp) taken[best_g] = true;
    out.decisions.emplace_back(idx, tp);
  }
  for (bool t : taken) {
    if (!t) ++out.fn;
  }
  return out;
}

// 101-point interpolated AP by scanning the whole decision stream once
// per recall grid point.
inline std::optional<double> naive_average_precision(
    const std::vector<reviewkit::Detection>& preds,
    const std::vector<reviewkit::GroundTruthBox>& gts,
    reviewkit::ObjectClass cls, double iou_tau) {
  std::vector<reviewkit::Detection> p;
  std::vector<reviewkit::GroundTruthBox> g;
  for (const auto& d : preds) {
    if (d.object_class == cls) p.push_back(d);
  }
  for (const auto& box : gts) {
    if (box.object_class == cls) g.push_back(box);
  }
  if (g.empty()) return std::nullopt;

  const NaiveMatch m = naive_match(p, g, iou_tau);
  std::vector<double> precision, recall;
  int tp = 0;
  for (std::size_t k = 0; k < m.decisions.size(); ++k) {
    if (m.decisions[k].second) ++tp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(g.size()));
  }

  double sum = 0.0;
  for (int j = 0; j <= 100; ++j) {
    const double r = static_cast<double>(j) / 100.0;
    double best = 0.0;
    for (std::size_t k = 0; k < precision.size(); ++k) {
      if (recall[k] >= r) best = std::max(best, precision[k]);
    }
    sum += best;
  }
  return sum / 101.0;
}

inline double naive_mean_ap(const std::vector<reviewkit::Detection>& preds,
                            const std::vector<reviewkit::GroundTruthBox>& gts) {
  std::set<int> codes;
  for (const auto& g : gts) codes.insert(static_cast<int>(g.object_class));
  if (codes.empty()) return 0.0;

  double total = 0.0;
  for (int code : codes) {
    double class_sum = 0.0;
    int n = 0;
    for (int i = 0; i < 10; ++i) {
      const double tau = static_cast<double>(50 + 5 * i) / 100.0;
      class_sum += naive_average_precision(
                       preds, gts, static_cast<reviewkit::ObjectClass>(code),
                       tau)
                       .value();
      ++n;
    }
    total += class_sum / n;
  }
  return total / static_cast<double>(codes.size());
}

struct NaivePrecision {
  double precision = 1.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

inline NaivePrecision naive_review_text_precision(
    const std::vector<reviewkit::Detection>& preds,
    const std::vector<reviewkit::GroundTruthBox>& gts, double conf_tau,
    double iou_tau) {
  std::vector<reviewkit::Detection> p;
  std::vector<reviewkit::GroundTruthBox> g;
  for (const auto& d : preds) {
    if (d.object_class == reviewkit::ObjectClass::review_text &&
        d.confidence >= conf_tau) {
      p.push_back(d);
    }
  }
  for (const auto& box : gts) {
    if (box.object_class == reviewkit::ObjectClass::review_text) {
      g.push_back(box);
    }
  }
  const NaiveMatch m = naive_match(p, g, iou_tau);
  NaivePrecision result;
  for (const auto& [idx, is_tp] : m.decisions) {
    (is_tp ? result.tp : result.fp) += 1;
  }
  result.fn = m.fn;
  if (result.tp + result.fp > 0) {
    result.precision = static_cast<double>(result.tp) /
                       static_cast<double>(result.tp + result.fp);
  }
  return result;
}

// Greedy class-wise suppression, re-derived: independent grouping and an
// O(n²) keep loop per group, results mapped back to input order.
inline std::vector<reviewkit::Detection> naive_nms(
    const std::vector<reviewkit::Detection>& dets, double iou_tau) {
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    groups[{dets[i].image_id, static_cast<int>(dets[i].object_class)}]
        .push_back(i);
  }
  std::vector<bool> keep(dets.size(), false);
  for (auto& [key, indices] : groups) {
    std::stable_sort(indices.begin(), indices.end(),
                     [&dets](std::size_t a, std::size_t b) {
                       return dets[a].confidence > dets[b].confidence;
                     });
    std::vector<std::size_t> kept;
    for (std::size_t i : indices) {
      bool suppressed = false;
      for (std::size_t k : kept) {
        if (iou_ref(dets[i].box, dets[k].box) >= iou_tau) {
          suppressed = true;
          break;
        }
      }
      if (!suppressed) {
        kept.push_back(i);
        keep[i] = true;
      }
    }
  }
  std::vector<reviewkit::Detection> out;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (keep[i]) out.push_back(dets[i]);
  }
  return out;
}

// Best rating→text assignment by exhaustive enumeration: maximum
// cardinality first, then minimum total |vertical gap|. Candidate rule
// restated from the association contract.
struct BestAssignment {
  int cardinality = 0;
  double total_cost = 0.0;
};

inline bool candidate_ref(const reviewkit::BoundingBox& rating,
                          const reviewkit::BoundingBox& text) {
  const double overlap_x = std::min(rating.x_max, text.x_max) -
                           std::max(rating.x_min, text.x_min);
  const double ratio =
      overlap_x <= 0.0
          ? 0.0
          : std::min(1.0, overlap_x / (rating.x_max - rating.x_min));
  const double gap = text.y_min - rating.y_max;
  return ratio >= 0.5 && gap >= -0.5 * (rating.y_max - rating.y_min);
}

inline void best_assignment_rec(
    const std::vector<reviewkit::BoundingBox>& ratings,
    const std::vector<reviewkit::BoundingBox>& texts, std::size_t next_rating,
    std::vector<bool>& text_used, int cardinality, double cost,
    BestAssignment& best) {
  if (next_rating == ratings.size()) {
    if (cardinality > best.cardinality ||
        (cardinality == best.cardinality && cost < best.total_cost)) {
      best.cardinality = cardinality;
      best.total_cost = cost;
    }
    return;
  }
  // leave this rating unassigned
  best_assignment_rec(ratings, texts, next_rating + 1, text_used, cardinality,
                      cost, best);
  for (std::size_t t = 0; t < texts.size(); ++t) {
    if (text_used[t] || !candidate_ref(ratings[next_rating], texts[t])) {
      continue;
    }
    text_used[t] = true;
    const double gap = texts[t].y_min - ratings[next_rating].y_max;
    best_assignment_rec(ratings, texts, next_rating + 1, text_used,
                        cardinality + 1, cost + std::abs(gap), best);
    text_used[t] = false;
  }
}

inline BestAssignment exhaustive_best_assignment(
    const std::vector<reviewkit::BoundingBox>& ratings,
    const std::vector<reviewkit::BoundingBox>& texts) {
  BestAssignment best;
  best.cardinality = -1;
  std::vector<bool> text_used(texts.size(), false);
  best_assignment_rec(ratings, texts, 0, text_used, 0, 0.0, best);
  return best;
}

// Deterministic generator helpers shared by the randomized suites.
inline reviewkit::BoundingBox random_box(std::mt19937& rng, double span,
                                         double min_extent = 1.0) {
  std::uniform_real_distribution<double> coord(0.0, span);
  for (;;) {
    double x0 = coord(rng), x1 = coord(rng);
    double y0 = coord(rng), y1 = coord(rng);
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    if (x1 - x0 >= min_extent && y1 - y0 >= min_extent) {
      return reviewkit::BoundingBox(x0, y0, x1, y1);
    }
  }
}

}  // namespace oracle
