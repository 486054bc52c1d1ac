#pragma once

#include <filesystem>
#include <string>

#include "reviewkit/analyze.hpp"

namespace reviewkit {

/// Backend choices by registry name. "off" disables an optional analysis
/// stage entirely (its flags stay absent).
struct BackendSelections {
  std::string detector = "fixture";
  std::string ocr = "fixture";
  std::string sentiment = "lexicon";     // lexicon | off
  std::string language = "heuristic";    // heuristic | off
  std::string translator = "off";        // passthrough | fixture | off
  std::string authenticity = "off";      // unknown | fixture | off
};

/// Everything the pipeline runs from. Loaded from a key-value config
/// file, then overridden by command-line flags.
struct PipelineConfig {
  // Locations. Paths read from a config file resolve relative to the
  // file's directory; paths from flags resolve relative to the cwd.
  std::filesystem::path input_dir;
  std::filesystem::path input_records;  // analyze input file
  std::filesystem::path output_records;
  std::filesystem::path output_annotated;
  std::filesystem::path output_filtered;
  std::filesystem::path output_report;
  std::filesystem::path predictions_dir;
  std::filesystem::path ground_truth_dir;

  BackendSelections backends;
  std::filesystem::path lexicon_path;        // optional lexicon override
  std::filesystem::path translations_table;  // required by translator=fixture
  std::filesystem::path authenticity_table;  // required by authenticity=fixture

  double conf_threshold = 0.8;  // detection confidence cut in extract
  double nms_iou = 0.5;         // suppression overlap threshold
  double pad_px = 2.0;          // crop padding around text boxes
  double jaccard_tau = 0.9;     // near-duplicate similarity threshold
  std::string target_language = "en";
  RatingPolarityMap rating_polarity_map = default_rating_polarity_map();
  VeracityPolicy policy;
  int workers = 1;
};

/// Parse `stars:polarity` pairs separated by commas, e.g.
/// "1:negative,2:negative,3:neutral,4:positive,5:positive".
RatingPolarityMap parse_rating_polarity_map(const std::string& value);

/// Apply one `key = value` setting. base_dir anchors relative paths;
/// source/line label errors. Unknown keys and bad values are ConfigError.
void apply_config_value(PipelineConfig& config, const std::string& key,
                        const std::string& value,
                        const std::filesystem::path& base_dir,
                        const std::string& source, int line);

/// Load a config file: one `key = value` per line, `#` comments, blank
/// lines ignored. Relative paths resolve against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Validate ranges and cross-field requirements; throws ConfigError.
void validate(const PipelineConfig& config);

}  // namespace reviewkit
