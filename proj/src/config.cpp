#include "reviewkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "reviewkit/errors.hpp"

namespace reviewkit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& msg) {
  if (source.empty()) {
    throw ConfigError(msg);
  }
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& value, const std::string& key,
                    const std::string& source, int line) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(value, &consumed);
    if (consumed != value.size() || !std::isfinite(v)) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    fail(source, line, "bad number '" + value + "' for " + key);
  }
}

int parse_int(const std::string& value, const std::string& key,
              const std::string& source, int line) {
  try {
    std::size_t consumed = 0;
    const int v = std::stoi(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(source, line, "bad integer '" + value + "' for " + key);
  }
}

bool parse_bool(const std::string& value, const std::string& key,
                const std::string& source, int line) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(source, line, "bad boolean '" + value + "' for " + key +
                         " (expected true or false)");
}

std::filesystem::path resolve(const std::string& value,
                              const std::filesystem::path& base_dir) {
  std::filesystem::path p(value);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

}  // namespace

RatingPolarityMap parse_rating_polarity_map(const std::string& value) {
  RatingPolarityMap map;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const std::string pair =
        trim(value.substr(start, comma == std::string::npos
                                     ? std::string::npos
                                     : comma - start));
    if (pair.empty()) {
      throw ConfigError("empty entry in rating polarity map '" + value + "'");
    }
    const auto colon = pair.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("expected stars:polarity, got '" + pair + "'");
    }
    const std::string stars_text = trim(pair.substr(0, colon));
    const std::string polarity_text = trim(pair.substr(colon + 1));
    int stars = 0;
    try {
      std::size_t consumed = 0;
      stars = std::stoi(stars_text, &consumed);
      if (consumed != stars_text.size()) throw std::invalid_argument(stars_text);
    } catch (const std::exception&) {
      throw ConfigError("bad star count '" + stars_text + "'");
    }
    if (stars < 1 || stars > 5) {
      throw ConfigError("star count " + stars_text + " outside 1..5");
    }
    const auto polarity = polarity_from_string(polarity_text);
    if (!polarity) {
      throw ConfigError("unknown polarity '" + polarity_text + "'");
    }
    if (map.contains(stars)) {
      throw ConfigError("duplicate star count " + stars_text);
    }
    map.emplace(stars, *polarity);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return map;
}

void apply_config_value(PipelineConfig& config, const std::string& key,
                        const std::string& value,
                        const std::filesystem::path& base_dir,
                        const std::string& source, int line) {
  if (key == "input_dir") {
    config.input_dir = resolve(value, base_dir);
  } else if (key == "input_records") {
    config.input_records = resolve(value, base_dir);
  } else if (key == "output_records") {
    config.output_records = resolve(value, base_dir);
  } else if (key == "output_annotated") {
    config.output_annotated = resolve(value, base_dir);
  } else if (key == "output_filtered") {
    config.output_filtered = resolve(value, base_dir);
  } else if (key == "output_report") {
    config.output_report = resolve(value, base_dir);
  } else if (key == "predictions_dir") {
    config.predictions_dir = resolve(value, base_dir);
  } else if (key == "ground_truth_dir") {
    config.ground_truth_dir = resolve(value, base_dir);
  } else if (key == "detector") {
    config.backends.detector = value;
  } else if (key == "ocr") {
    config.backends.ocr = value;
  } else if (key == "sentiment") {
    config.backends.sentiment = value;
  } else if (key == "language") {
    config.backends.language = value;
  } else if (key == "translator") {
    config.backends.translator = value;
  } else if (key == "authenticity") {
    config.backends.authenticity = value;
  } else if (key == "lexicon") {
    config.lexicon_path = resolve(value, base_dir);
  } else if (key == "translations_table") {
    config.translations_table = resolve(value, base_dir);
  } else if (key == "authenticity_table") {
    config.authenticity_table = resolve(value, base_dir);
  } else if (key == "conf_threshold") {
    config.conf_threshold = parse_double(value, key, source, line);
  } else if (key == "nms_iou") {
    config.nms_iou = parse_double(value, key, source, line);
  } else if (key == "pad_px") {
    config.pad_px = parse_double(value, key, source, line);
  } else if (key == "jaccard_tau") {
    config.jaccard_tau = parse_double(value, key, source, line);
  } else if (key == "target_language") {
    config.target_language = value;
  } else if (key == "rating_polarity") {
    try {
      config.rating_polarity_map = parse_rating_polarity_map(value);
    } catch (const ConfigError& e) {
      fail(source, line, e.what());
    }
  } else if (key == "drop_inconsistent") {
    config.policy.drop_inconsistent = parse_bool(value, key, source, line);
  } else if (key == "drop_fake") {
    config.policy.drop_fake = parse_bool(value, key, source, line);
  } else if (key == "workers") {
    config.workers = parse_int(value, key, source, line);
  } else {
    fail(source, line, "unknown config key '" + key + "'");
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }

  PipelineConfig config;
  const std::filesystem::path base_dir = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.starts_with('#')) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": empty key");
    }
    apply_config_value(config, key, value, base_dir, path.string(), line_no);
  }
  return config;
}

void validate(const PipelineConfig& config) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(config.conf_threshold)) {
    throw ConfigError("conf_threshold must be in [0,1]");
  }
  if (!in_unit(config.nms_iou)) {
    throw ConfigError("nms_iou must be in [0,1]");
  }
  if (!in_unit(config.jaccard_tau)) {
    throw ConfigError("jaccard_tau must be in [0,1]");
  }
  if (config.pad_px < 0.0) {
    throw ConfigError("pad_px must be >= 0");
  }
  if (config.workers < 1) {
    throw ConfigError("workers must be >= 1");
  }

  auto one_of = [](const std::string& name,
                   std::initializer_list<const char*> allowed) {
    return std::any_of(allowed.begin(), allowed.end(),
                       [&name](const char* a) { return name == a; });
  };
  if (!one_of(config.backends.detector, {"fixture"})) {
    throw ConfigError("unknown detector backend '" +
                      config.backends.detector + "'");
  }
  if (!one_of(config.backends.ocr, {"fixture"})) {
    throw ConfigError("unknown ocr backend '" + config.backends.ocr + "'");
  }
  if (!one_of(config.backends.sentiment, {"lexicon", "off"})) {
    throw ConfigError("unknown sentiment backend '" +
                      config.backends.sentiment + "'");
  }
  if (!one_of(config.backends.language, {"heuristic", "off"})) {
    throw ConfigError("unknown language backend '" +
                      config.backends.language + "'");
  }
  if (!one_of(config.backends.translator, {"passthrough", "fixture", "off"})) {
    throw ConfigError("unknown translator backend '" +
                      config.backends.translator + "'");
  }
  if (!one_of(config.backends.authenticity, {"unknown", "fixture", "off"})) {
    throw ConfigError("unknown authenticity backend '" +
                      config.backends.authenticity + "'");
  }
  if (config.backends.translator == "fixture" &&
      config.translations_table.empty()) {
    throw ConfigError("translator=fixture requires translations_table");
  }
  if (config.backends.authenticity == "fixture" &&
      config.authenticity_table.empty()) {
    throw ConfigError("authenticity=fixture requires authenticity_table");
  }
  if (config.backends.translator != "off") {
    const auto& codes = known_languages();
    if (std::find(codes.begin(), codes.end(), config.target_language) ==
        codes.end()) {
      throw ConfigError("unknown target_language '" + config.target_language +
                        "'");
    }
    if (config.backends.language == "off") {
      throw ConfigError("translation requires the language stage");
    }
  }
}

}  // namespace reviewkit
