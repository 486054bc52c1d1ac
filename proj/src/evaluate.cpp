#include "reviewkit/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "reviewkit/errors.hpp"

namespace reviewkit {

namespace {

using ordered_json = nlohmann::ordered_json;

bool parse_double_token(const std::string& token, double& out) {
  try {
    std::size_t consumed = 0;
    out = std::stod(token, &consumed);
    return consumed == token.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

GroundTruthBox parse_yolo_line(const std::string& line,
                               const std::string& image_id, int image_w,
                               int image_h) {
  if (image_w <= 0 || image_h <= 0) {
    throw ParseError("non-positive image dimensions for " + image_id);
  }

  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string tok;
  while (in >> tok) fields.push_back(tok);
  if (fields.size() != 5) {
    throw ParseError("malformed line: expected 5 fields, got " +
                     std::to_string(fields.size()));
  }

  double raw_class = 0.0;
  if (!parse_double_token(fields[0], raw_class) ||
      raw_class != std::floor(raw_class)) {
    throw ParseError("malformed line: bad class id '" + fields[0] + "'");
  }
  const auto cls = class_from_code(static_cast<int>(raw_class));
  if (!cls) {
    throw ParseError("class id " + fields[0] + " out of range 0..5");
  }

  double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
  if (!parse_double_token(fields[1], cx) || !parse_double_token(fields[2], cy) ||
      !parse_double_token(fields[3], w) || !parse_double_token(fields[4], h)) {
    throw ParseError("malformed line: non-numeric coordinate");
  }
  for (double v : {cx, cy, w, h}) {
    if (v < 0.0 || v > 1.0) {
      throw ParseError("malformed line: coordinate outside [0,1]");
    }
  }
  if (w <= 0.0 || h <= 0.0) {
    throw ParseError("malformed line: zero-size box");
  }

  const double W = static_cast<double>(image_w);
  const double H = static_cast<double>(image_h);
  double x0 = (cx - w / 2.0) * W;
  double y0 = (cy - h / 2.0) * H;
  double x1 = (cx + w / 2.0) * W;
  double y1 = (cy + h / 2.0) * H;

  // Tolerate float rounding at the image border, reject genuine overflow.
  const double eps = 1e-9;
  if (x0 < -eps * W || y0 < -eps * H || x1 > W * (1.0 + eps) ||
      y1 > H * (1.0 + eps)) {
    throw ParseError("box extends outside the image");
  }
  x0 = std::clamp(x0, 0.0, W);
  y0 = std::clamp(y0, 0.0, H);
  x1 = std::clamp(x1, 0.0, W);
  y1 = std::clamp(y1, 0.0, H);

  return GroundTruthBox{image_id, *cls, BoundingBox(x0, y0, x1, y1)};
}

MatchResult match(const std::vector<Detection>& preds,
                  const std::vector<GroundTruthBox>& gts, double iou_tau) {
  std::vector<std::size_t> rank(preds.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(),
                   [&preds](std::size_t i, std::size_t j) {
                     return preds[i].confidence > preds[j].confidence;
                   });

  std::vector<bool> gt_matched(gts.size(), false);
  MatchResult result;
  result.decisions.reserve(preds.size());

  for (std::size_t idx : rank) {
    const Detection& p = preds[idx];
    double best_iou = 0.0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_matched[g]) continue;
      if (gts[g].object_class != p.object_class) continue;
      if (gts[g].image_id != p.image_id) continue;
      const double overlap = iou(p.box, gts[g].box);
      if (overlap > best_iou) {  // ties keep the earliest ground truth
        best_iou = overlap;
        best_gt = g;
      }
    }
    const bool is_tp = best_gt < gts.size() && best_iou >= iou_tau;
    if (is_tp) gt_matched[best_gt] = true;
    result.decisions.push_back({idx, is_tp});
  }

  result.fn = static_cast<int>(
      std::count(gt_matched.begin(), gt_matched.end(), false));
  return result;
}

PrecisionResult precision_review_text(const std::vector<Detection>& preds,
                                      const std::vector<GroundTruthBox>& gts,
                                      double conf_tau, double iou_tau) {
  std::vector<Detection> text_preds;
  for (const Detection& p : preds) {
    if (p.object_class == ObjectClass::review_text && p.confidence >= conf_tau) {
      text_preds.push_back(p);
    }
  }
  std::vector<GroundTruthBox> text_gts;
  for (const GroundTruthBox& g : gts) {
    if (g.object_class == ObjectClass::review_text) text_gts.push_back(g);
  }

  const MatchResult m = match(text_preds, text_gts, iou_tau);
  PrecisionResult out;
  for (const MatchDecision& d : m.decisions) {
    if (d.is_tp) {
      ++out.tp;
    } else {
      ++out.fp;
    }
  }
  out.fn = m.fn;
  out.precision = (out.tp + out.fp) == 0
                      ? 1.0
                      : static_cast<double>(out.tp) /
                            static_cast<double>(out.tp + out.fp);
  return out;
}

std::optional<double> average_precision(const std::vector<Detection>& preds,
                                        const std::vector<GroundTruthBox>& gts,
                                        ObjectClass object_class,
                                        double iou_tau) {
  std::vector<Detection> class_preds;
  for (const Detection& p : preds) {
    if (p.object_class == object_class) class_preds.push_back(p);
  }
  std::vector<GroundTruthBox> class_gts;
  for (const GroundTruthBox& g : gts) {
    if (g.object_class == object_class) class_gts.push_back(g);
  }
  if (class_gts.empty()) return std::nullopt;  // vacuous class

  const MatchResult m = match(class_preds, class_gts, iou_tau);
  const double n_gt = static_cast<double>(class_gts.size());

  std::vector<double> precision(m.decisions.size());
  std::vector<double> recall(m.decisions.size());
  int tp = 0;
  for (std::size_t k = 0; k < m.decisions.size(); ++k) {
    if (m.decisions[k].is_tp) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / n_gt;
  }

  // Precision envelope over the 101-point recall grid: walk ranks from the
  // back while sweeping the grid downward; `best` is the running maximum
  // of precision over the suffix of ranks whose recall clears the grid point.
  double ap_sum = 0.0;
  double best = 0.0;
  std::ptrdiff_t k = static_cast<std::ptrdiff_t>(m.decisions.size()) - 1;
  for (int j = 100; j >= 0; --j) {
    const double r = static_cast<double>(j) / 100.0;
    while (k >= 0 && recall[static_cast<std::size_t>(k)] >= r) {
      best = std::max(best, precision[static_cast<std::size_t>(k)]);
      --k;
    }
    ap_sum += best;
  }
  return ap_sum / 101.0;
}

const std::vector<double>& iou_sweep() {
  static const std::vector<double> sweep = [] {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) {
      v.push_back(static_cast<double>(50 + 5 * i) / 100.0);
    }
    return v;
  }();
  return sweep;
}

double mean_ap(const std::vector<Detection>& preds,
               const std::vector<GroundTruthBox>& gts) {
  std::set<int> class_codes;
  for (const GroundTruthBox& g : gts) {
    class_codes.insert(static_cast<int>(g.object_class));
  }
  if (class_codes.empty()) return 0.0;

  double sum = 0.0;
  for (int code : class_codes) {
    const ObjectClass cls = static_cast<ObjectClass>(code);
    double class_sum = 0.0;
    for (double tau : iou_sweep()) {
      class_sum += average_precision(preds, gts, cls, tau).value();
    }
    sum += class_sum / static_cast<double>(iou_sweep().size());
  }
  return sum / static_cast<double>(class_codes.size());
}

std::string threshold_key(double tau) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", tau);
  return buf;
}

EvaluationReport evaluate_detections(const std::vector<Detection>& preds,
                                     const std::vector<GroundTruthBox>& gts,
                                     const EvaluationSettings& settings) {
  EvaluationReport report;
  report.settings = settings;

  const std::vector<Detection> map_preds =
      settings.map_conf_threshold > 0.0
          ? filter_confidence(preds, settings.map_conf_threshold)
          : preds;

  std::set<int> class_codes;
  for (const GroundTruthBox& g : gts) {
    class_codes.insert(static_cast<int>(g.object_class));
  }

  double sum = 0.0;
  for (int code : class_codes) {
    const ObjectClass cls = static_cast<ObjectClass>(code);
    auto& row = report.per_class_ap[to_string(cls)];
    double class_sum = 0.0;
    for (double tau : settings.iou_thresholds) {
      const double ap = average_precision(map_preds, gts, cls, tau).value();
      row[threshold_key(tau)] = ap;
      class_sum += ap;
    }
    sum += class_sum / static_cast<double>(settings.iou_thresholds.size());
  }
  report.map_score =
      class_codes.empty() ? 0.0 : sum / static_cast<double>(class_codes.size());

  const PrecisionResult p = precision_review_text(
      preds, gts, settings.conf_threshold, settings.precision_iou);
  report.review_text_precision = p.precision;
  report.tp = p.tp;
  report.fp = p.fp;
  report.fn = p.fn;
  return report;
}

std::string serialize_report(const EvaluationReport& report) {
  ordered_json doc;
  doc["map"] = report.map_score;
  ordered_json per_class = ordered_json::object();
  for (const auto& [cls, row] : report.per_class_ap) {
    ordered_json entry = ordered_json::object();
    for (const auto& [key, ap] : row) entry[key] = ap;
    per_class[cls] = entry;
  }
  doc["per_class_ap"] = per_class;
  doc["precision_review_text"] = report.review_text_precision;
  doc["tp"] = report.tp;
  doc["fp"] = report.fp;
  doc["fn"] = report.fn;
  doc["settings"] = {
      {"conf_threshold", report.settings.conf_threshold},
      {"precision_iou", report.settings.precision_iou},
      {"map_conf_threshold", report.settings.map_conf_threshold},
      {"iou_thresholds", report.settings.iou_thresholds},
  };
  return doc.dump(2) + "\n";
}

EvaluationReport parse_report(const std::string& content) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
  for (const char* key :
       {"map", "per_class_ap", "precision_review_text", "tp", "fp", "fn",
        "settings"}) {
    if (!doc.contains(key)) {
      throw ParseError(std::string("report missing key '") + key + "'");
    }
  }

  EvaluationReport report;
  report.map_score = doc["map"].get<double>();
  for (const auto& [cls, row] : doc["per_class_ap"].items()) {
    if (!class_from_string(cls)) {
      throw ParseError("report has unknown class '" + cls + "'");
    }
    for (const auto& [key, ap] : row.items()) {
      report.per_class_ap[cls][key] = ap.get<double>();
    }
  }
  report.review_text_precision = doc["precision_review_text"].get<double>();
  report.tp = doc["tp"].get<int>();
  report.fp = doc["fp"].get<int>();
  report.fn = doc["fn"].get<int>();
  const auto& s = doc["settings"];
  report.settings.conf_threshold = s.at("conf_threshold").get<double>();
  report.settings.precision_iou = s.at("precision_iou").get<double>();
  report.settings.map_conf_threshold = s.at("map_conf_threshold").get<double>();
  report.settings.iou_thresholds =
      s.at("iou_thresholds").get<std::vector<double>>();
  return report;
}

}  // namespace reviewkit
