#include "reviewkit/detect.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "reviewkit/errors.hpp"

namespace reviewkit {

namespace {

const char* const kClassNames[kNumClasses] = {
    "rating_1", "rating_2", "rating_3", "rating_4", "rating_5", "review_text",
};

using ordered_json = nlohmann::ordered_json;

Detection detection_from_json(const nlohmann::json& obj,
                              const std::string& image_id,
                              const std::string& source, int line) {
  if (!obj.is_object()) {
    throw ParseError(source, line, "malformed entry: expected a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (key != "class" && key != "confidence" && key != "bbox") {
      throw ParseError(source, line, "malformed entry: unknown field '" + key + "'");
    }
  }
  if (!obj.contains("class") || !obj["class"].is_string()) {
    throw ParseError(source, line, "malformed entry: missing string field 'class'");
  }
  if (!obj.contains("confidence") || !obj["confidence"].is_number()) {
    throw ParseError(source, line,
                     "malformed entry: missing numeric field 'confidence'");
  }
  if (!obj.contains("bbox") || !obj["bbox"].is_array() || obj["bbox"].size() != 4) {
    throw ParseError(source, line,
                     "malformed entry: 'bbox' must be [x_min,y_min,x_max,y_max]");
  }
  for (const auto& v : obj["bbox"]) {
    if (!v.is_number()) {
      throw ParseError(source, line, "malformed entry: non-numeric bbox value");
    }
  }

  const std::string class_name = obj["class"].get<std::string>();
  const auto cls = class_from_string(class_name);
  if (!cls) {
    throw ParseError(source, line, "unknown class '" + class_name + "'");
  }

  const double confidence = obj["confidence"].get<double>();
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ParseError(source, line,
                     "confidence " + std::to_string(confidence) +
                         " outside [0,1]");
  }

  try {
    BoundingBox box(obj["bbox"][0].get<double>(), obj["bbox"][1].get<double>(),
                    obj["bbox"][2].get<double>(), obj["bbox"][3].get<double>());
    return Detection{image_id, *cls, confidence, box};
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line, std::string("invalid box: ") + e.what());
  }
}

}  // namespace

const char* to_string(ObjectClass c) {
  return kClassNames[static_cast<int>(c)];
}

std::optional<ObjectClass> class_from_string(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (name == kClassNames[i]) return static_cast<ObjectClass>(i);
  }
  return std::nullopt;
}

std::optional<ObjectClass> class_from_code(int code) {
  if (code < 0 || code >= kNumClasses) return std::nullopt;
  return static_cast<ObjectClass>(code);
}

void validate(const Detection& d) {
  if (d.image_id.empty()) {
    throw ParseError("detection has empty image_id");
  }
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw ParseError("detection confidence " + std::to_string(d.confidence) +
                     " outside [0,1]");
  }
}

std::vector<Detection> FixtureDetector::detect(const ImageRef& image) {
  std::filesystem::path sidecar = image.path;
  sidecar.replace_extension(".detections.json");
  std::ifstream in(sidecar, std::ios::binary);
  if (!in) {
    throw BackendError(image.image_id,
                       "no detection sidecar at " + sidecar.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_detection_file(buf.str(), image.image_id);
  } catch (const ParseError& e) {
    throw BackendError(image.image_id, e.what());
  }
}

std::vector<Detection> parse_detection_file(const std::string& content,
                                            const std::string& image_id) {
  std::vector<Detection> result;
  const std::string source = image_id;

  const auto first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return result;  // blank file means no detections
  }

  if (content[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, 1, std::string("bad JSON: ") + e.what());
    }
    int index = 1;
    for (const auto& obj : doc) {
      result.push_back(detection_from_json(obj, image_id, source, index));
      ++index;
    }
    return result;
  }

  // Newline-delimited objects.
  std::istringstream lines(content);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, std::string("bad JSON: ") + e.what());
    }
    result.push_back(detection_from_json(obj, image_id, source, line_no));
  }
  return result;
}

std::string serialize_detections(const std::vector<Detection>& dets) {
  std::string out;
  for (const Detection& d : dets) {
    ordered_json obj;
    obj["class"] = to_string(d.object_class);
    obj["confidence"] = d.confidence;
    obj["bbox"] = {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<Detection> filter_confidence(const std::vector<Detection>& dets,
                                         double tau) {
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    if (d.confidence >= tau) kept.push_back(d);
  }
  return kept;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_tau) {
  // Visit per (image, class) group in descending confidence, input order
  // breaking ties.
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&dets](std::size_t i, std::size_t j) {
                     return dets[i].confidence > dets[j].confidence;
                   });

  std::vector<bool> kept(dets.size(), false);
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> kept_by_group;
  for (std::size_t idx : order) {
    const Detection& d = dets[idx];
    auto& group = kept_by_group[{d.image_id, static_cast<int>(d.object_class)}];
    bool suppressed = false;
    for (std::size_t k : group) {
      if (iou(d.box, dets[k].box) >= iou_tau) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept[idx] = true;
      group.push_back(idx);
    }
  }

  std::vector<Detection> result;
  result.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (kept[i]) result.push_back(dets[i]);
  }
  return result;
}

}  // namespace reviewkit
