#include "reviewkit/record_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reviewkit/errors.hpp"

namespace reviewkit {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json box_to_json(const BoundingBox& box) {
  return ordered_json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

BoundingBox box_from_json(const nlohmann::json& value,
                          const std::string& source, int line,
                          const char* key) {
  if (!value.is_array() || value.size() != 4) {
    throw ParseError(source, line,
                     std::string(key) + " must be [x_min, y_min, x_max, y_max]");
  }
  for (const auto& coord : value) {
    if (!coord.is_number()) {
      throw ParseError(source, line,
                       std::string(key) + " has a non-numeric coordinate");
    }
  }
  try {
    return BoundingBox(value[0].get<double>(), value[1].get<double>(),
                       value[2].get<double>(), value[3].get<double>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line, std::string(key) + ": " + e.what());
  }
}

ordered_json flags_to_json(const AnalysisFlags& flags) {
  ordered_json out = ordered_json::object();
  if (flags.comment_polarity) {
    out["comment_polarity"] = to_string(*flags.comment_polarity);
  }
  if (flags.rating_polarity) {
    out["rating_polarity"] = to_string(*flags.rating_polarity);
  }
  if (flags.sentiment_inconsistent) {
    out["sentiment_inconsistent"] = *flags.sentiment_inconsistent;
  }
  if (flags.language) out["language"] = *flags.language;
  if (flags.translated_text) out["translated_text"] = *flags.translated_text;
  if (flags.authenticity) {
    out["authenticity"] = to_string(*flags.authenticity);
  }
  return out;
}

AnalysisFlags flags_from_json(const nlohmann::json& value,
                              const std::string& source, int line) {
  if (!value.is_object()) {
    throw ParseError(source, line, "flags must be an object");
  }
  AnalysisFlags flags;
  for (const auto& [key, field] : value.items()) {
    if (key == "comment_polarity" || key == "rating_polarity") {
      if (!field.is_string()) {
        throw ParseError(source, line, key + " must be a string");
      }
      const auto polarity = polarity_from_string(field.get<std::string>());
      if (!polarity) {
        throw ParseError(source, line,
                         "unknown polarity '" + field.get<std::string>() + "'");
      }
      if (key == "comment_polarity") {
        flags.comment_polarity = *polarity;
      } else {
        flags.rating_polarity = *polarity;
      }
    } else if (key == "sentiment_inconsistent") {
      if (!field.is_boolean()) {
        throw ParseError(source, line, key + " must be a boolean");
      }
      flags.sentiment_inconsistent = field.get<bool>();
    } else if (key == "language") {
      if (!field.is_string()) {
        throw ParseError(source, line, key + " must be a string");
      }
      flags.language = field.get<std::string>();
    } else if (key == "translated_text") {
      if (!field.is_string()) {
        throw ParseError(source, line, key + " must be a string");
      }
      flags.translated_text = field.get<std::string>();
    } else if (key == "authenticity") {
      if (!field.is_string()) {
        throw ParseError(source, line, key + " must be a string");
      }
      const auto label = authenticity_from_string(field.get<std::string>());
      if (!label) {
        throw ParseError(
            source, line,
            "unknown authenticity '" + field.get<std::string>() + "'");
      }
      flags.authenticity = *label;
    } else {
      throw ParseError(source, line, "unknown flag '" + key + "'");
    }
  }
  if (flags.sentiment_inconsistent &&
      (!flags.comment_polarity || !flags.rating_polarity)) {
    throw ParseError(source, line,
                     "sentiment_inconsistent requires both polarities");
  }
  return flags;
}

constexpr const char* kRecordKeys[] = {
    "record_id", "image_id", "platform", "text",
    "stars",     "text_box", "rating_box", "flags"};

}  // namespace

std::string serialize_record(const ReviewRecord& record) {
  ordered_json doc;
  doc["record_id"] = record.record_id;
  doc["image_id"] = record.image_id;
  doc["platform"] =
      record.platform ? ordered_json(*record.platform) : ordered_json(nullptr);
  doc["text"] = record.text;
  doc["stars"] =
      record.stars ? ordered_json(*record.stars) : ordered_json(nullptr);
  doc["text_box"] = box_to_json(record.text_box);
  doc["rating_box"] = record.rating_box ? box_to_json(*record.rating_box)
                                        : ordered_json(nullptr);
  doc["flags"] = flags_to_json(record.flags);
  return doc.dump();
}

std::string serialize_records(const std::vector<ReviewRecord>& records) {
  std::string out;
  for (const ReviewRecord& record : records) {
    out += serialize_record(record);
    out += '\n';
  }
  return out;
}

ReviewRecord parse_record(const std::string& line,
                          const std::string& source_name, int line_number) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, line_number,
                     std::string("bad JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(source_name, line_number, "record must be an object");
  }
  for (const char* key : kRecordKeys) {
    if (!doc.contains(key)) {
      throw ParseError(source_name, line_number,
                       std::string("missing key '") + key + "'");
    }
  }
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kRecordKeys), std::end(kRecordKeys),
                     [&key](const char* k) { return key == k; }) ==
        std::end(kRecordKeys)) {
      throw ParseError(source_name, line_number, "unknown key '" + key + "'");
    }
  }

  if (!doc["record_id"].is_string() || !doc["image_id"].is_string() ||
      !doc["text"].is_string()) {
    throw ParseError(source_name, line_number,
                     "record_id, image_id and text must be strings");
  }

  ReviewRecord record{
      doc["record_id"].get<std::string>(),
      doc["image_id"].get<std::string>(),
      std::nullopt,
      doc["text"].get<std::string>(),
      std::nullopt,
      box_from_json(doc["text_box"], source_name, line_number, "text_box"),
      std::nullopt,
      flags_from_json(doc["flags"], source_name, line_number)};

  if (!doc["platform"].is_null()) {
    if (!doc["platform"].is_string()) {
      throw ParseError(source_name, line_number, "platform must be a string");
    }
    record.platform = doc["platform"].get<std::string>();
  }
  if (!doc["stars"].is_null()) {
    if (!doc["stars"].is_number_integer()) {
      throw ParseError(source_name, line_number, "stars must be an integer");
    }
    const int stars = doc["stars"].get<int>();
    if (stars < 1 || stars > 5) {
      throw ParseError(source_name, line_number,
                       "stars " + std::to_string(stars) + " outside 1..5");
    }
    record.stars = stars;
  }
  if (!doc["rating_box"].is_null()) {
    record.rating_box =
        box_from_json(doc["rating_box"], source_name, line_number,
                      "rating_box");
  }
  if (record.stars.has_value() != record.rating_box.has_value()) {
    throw ParseError(source_name, line_number,
                     "stars and rating_box must be present together");
  }
  if (record.text.empty()) {
    throw ParseError(source_name, line_number, "text must be non-empty");
  }
  return record;
}

std::vector<ReviewRecord> parse_records(const std::string& content,
                                        const std::string& source_name) {
  std::vector<ReviewRecord> records;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(parse_record(line, source_name, line_no));
  }
  return records;
}

std::vector<ReviewRecord> read_records_file(
    const std::filesystem::path& path) {
  return parse_records(read_text_file(path), path.string());
}

void write_records_file(const std::filesystem::path& path,
                        const std::vector<ReviewRecord>& records) {
  write_text_file(path, serialize_records(records));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (!path.parent_path().empty()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw ConfigError("failed writing " + path.string());
  }
}

}  // namespace reviewkit
