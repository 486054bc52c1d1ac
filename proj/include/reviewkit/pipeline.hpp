#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reviewkit/analyze.hpp"
#include "reviewkit/assemble.hpp"
#include "reviewkit/config.hpp"
#include "reviewkit/detect.hpp"
#include "reviewkit/evaluate.hpp"
#include "reviewkit/recognize.hpp"

namespace reviewkit {

/// Backend instances selected by the config. Analysis backends are null
/// when their stage is off.
struct Backends {
  std::unique_ptr<DetectorBackend> detector;
  std::unique_ptr<RecognizerBackend> ocr;
  std::unique_ptr<SentimentBackend> sentiment;
  std::unique_ptr<LanguageBackend> language;
  std::unique_ptr<TranslatorBackend> translator;
  std::unique_ptr<AuthenticityBackend> authenticity;
};

/// Instantiate backends by registry name; throws ConfigError on unknown
/// names (validate(config) reports them first with better messages).
Backends make_backends(const PipelineConfig& config);

/// detect -> confidence filter -> suppression (when the backend did not
/// already suppress) -> associate -> crop+recognize -> records.
/// Throws on unusable images and backend failures.
std::vector<ReviewRecord> process_image(const ImageRef& image,
                                        DetectorBackend& detector,
                                        RecognizerBackend& ocr,
                                        const PipelineConfig& config);

struct ExtractResult {
  std::vector<ReviewRecord> records;  // merged in image_id order, deduped
  std::vector<std::string> failures;  // "image_id: reason" per skipped image
  std::size_t images = 0;             // images found
};

/// Run the extraction pipeline over config.input_dir with a bounded
/// worker pool. Results are merged in image_id order whatever the
/// completion order, so output is identical for any worker count.
/// Per-image failures are collected, not fatal.
ExtractResult run_extract(const PipelineConfig& config);

/// Ground truth as read by run_evaluate: the dimension manifest
/// (`image_id width height` lines) plus one YOLO .txt per image.
struct GroundTruthSet {
  std::map<std::string, ImageSize> dimensions;  // by image_id
  std::vector<GroundTruthBox> boxes;
};

/// Load `dimensions.manifest` and every annotation file it references
/// from ground_truth_dir. Errors carry file and line. An annotation file
/// not listed in the manifest is a mismatch error.
GroundTruthSet load_ground_truth(const std::filesystem::path& ground_truth_dir);

/// Load `<image_id>.detections.json` prediction files for the manifest's
/// images from predictions_dir. A missing file means zero predictions for
/// that image; a prediction file for an image absent from the manifest is
/// a mismatch error.
std::vector<Detection> load_predictions(
    const std::filesystem::path& predictions_dir,
    const std::map<std::string, ImageSize>& dimensions);

/// Load ground truth + predictions per config and score them.
EvaluationReport run_evaluate(const PipelineConfig& config);

/// Fill in the flags of one record for every enabled analysis stage:
/// polarities and their consistency, language, translation, authenticity.
void annotate_record(ReviewRecord& record, const Backends& backends,
                     const PipelineConfig& config);

struct AnalyzeResult {
  std::vector<ReviewRecord> annotated;  // every input record, flags filled
  std::vector<ReviewRecord> filtered;   // after the veracity policy
};

/// Annotate all records (input order preserved), then apply the
/// config's veracity policy.
AnalyzeResult run_analyze(const PipelineConfig& config,
                          const std::vector<ReviewRecord>& records);

}  // namespace reviewkit
