#include "reviewkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace reviewkit {

namespace {

void check_coordinate(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("BoundingBox: ") + name +
                                " is not finite");
  }
  if (v < 0.0) {
    throw std::invalid_argument(std::string("BoundingBox: ") + name +
                                " is negative");
  }
}

}  // namespace

BoundingBox::BoundingBox(double x0, double y0, double x1, double y1)
    : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
  check_coordinate(x_min, "x_min");
  check_coordinate(y_min, "y_min");
  check_coordinate(x_max, "x_max");
  check_coordinate(y_max, "y_max");
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw std::invalid_argument("BoundingBox: zero or negative extent");
  }
}

double area(const BoundingBox& b) { return b.width() * b.height(); }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = area(a) + area(b) - inter;
  return inter / uni;
}

double horizontal_overlap_ratio(const BoundingBox& a, const BoundingBox& b) {
  const double overlap =
      std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  if (overlap <= 0.0) return 0.0;
  return std::min(1.0, overlap / a.width());
}

double vertical_gap(const BoundingBox& above, const BoundingBox& below) {
  return below.y_min - above.y_max;
}

std::vector<std::size_t> reading_order(const std::vector<BoundingBox>& boxes) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&boxes](std::size_t i, std::size_t j) {
                     if (boxes[i].y_min != boxes[j].y_min)
                       return boxes[i].y_min < boxes[j].y_min;
                     return boxes[i].x_min < boxes[j].x_min;
                   });
  return order;
}

}  // namespace reviewkit
