#pragma once

#include <cstddef>
#include <vector>

namespace reviewkit {

/// Axis-aligned rectangle in pixel coordinates. Origin is the top-left
/// corner of the image and y grows downward. Construction enforces a
/// strictly positive extent and finite, non-negative coordinates.
struct BoundingBox {
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min;
  double y_min;
  double x_max;
  double y_max;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool operator==(const BoundingBox&) const = default;
};

/// Box area in px².
double area(const BoundingBox& b);

/// Intersection over union, in [0, 1]. Zero for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Length of the x-interval overlap between a and b, divided by the width
/// of a. In [0, 1]; zero when the x-spans are disjoint.
double horizontal_overlap_ratio(const BoundingBox& a, const BoundingBox& b);

/// Signed vertical distance below.y_min - above.y_max, in pixels.
/// Negative when the two boxes overlap vertically.
double vertical_gap(const BoundingBox& above, const BoundingBox& below);

/// Indices of `boxes` in top-to-bottom, left-to-right order: stable sort
/// by (y_min, x_min), ties keeping input order.
std::vector<std::size_t> reading_order(const std::vector<BoundingBox>& boxes);

}  // namespace reviewkit
