#include "reviewkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "reviewkit/errors.hpp"
#include "reviewkit/record_io.hpp"

namespace reviewkit {

Backends make_backends(const PipelineConfig& config) {
  Backends backends;

  if (config.backends.detector == "fixture") {
    backends.detector = std::make_unique<FixtureDetector>();
  } else {
    throw ConfigError("unknown detector backend '" + config.backends.detector +
                      "'");
  }

  if (config.backends.ocr == "fixture") {
    backends.ocr = std::make_unique<FixtureRecognizer>();
  } else {
    throw ConfigError("unknown ocr backend '" + config.backends.ocr + "'");
  }

  if (config.backends.sentiment == "lexicon") {
    backends.sentiment =
        config.lexicon_path.empty()
            ? std::make_unique<LexiconSentiment>()
            : std::make_unique<LexiconSentiment>(
                  load_lexicon(config.lexicon_path));
  } else if (config.backends.sentiment != "off") {
    throw ConfigError("unknown sentiment backend '" +
                      config.backends.sentiment + "'");
  }

  if (config.backends.language == "heuristic") {
    backends.language = std::make_unique<HeuristicLanguage>();
  } else if (config.backends.language != "off") {
    throw ConfigError("unknown language backend '" + config.backends.language +
                      "'");
  }

  if (config.backends.translator == "passthrough") {
    backends.translator = std::make_unique<PassthroughTranslator>();
  } else if (config.backends.translator == "fixture") {
    backends.translator =
        std::make_unique<FixtureTranslator>(config.translations_table);
  } else if (config.backends.translator != "off") {
    throw ConfigError("unknown translator backend '" +
                      config.backends.translator + "'");
  }

  if (config.backends.authenticity == "unknown") {
    backends.authenticity = std::make_unique<UnknownAuthenticity>();
  } else if (config.backends.authenticity == "fixture") {
    backends.authenticity =
        std::make_unique<FixtureAuthenticity>(config.authenticity_table);
  } else if (config.backends.authenticity != "off") {
    throw ConfigError("unknown authenticity backend '" +
                      config.backends.authenticity + "'");
  }

  return backends;
}

std::vector<ReviewRecord> process_image(const ImageRef& image,
                                        DetectorBackend& detector,
                                        RecognizerBackend& ocr,
                                        const PipelineConfig& config) {
  if (image.width <= 0 || image.height <= 0) {
    throw BackendError(image.image_id,
                       "cannot read image dimensions from " +
                           image.path.string());
  }

  std::vector<Detection> dets = detector.detect(image);
  dets = filter_confidence(dets, config.conf_threshold);
  if (!detector.nms_applied()) {
    dets = nms(dets, config.nms_iou);
  }

  const std::vector<AssociatedPair> pairs = associate(dets);
  std::vector<std::string> texts;
  texts.reserve(pairs.size());
  for (const AssociatedPair& pair : pairs) {
    try {
      const BoundingBox rect =
          crop_rect(image.width, image.height, pair.text.box, config.pad_px);
      texts.push_back(normalize_text(ocr.recognize(image, rect)));
    } catch (const DegenerateCropError&) {
      // A text box entirely outside the image reads as empty and the
      // record is dropped, like any other unreadable region.
      texts.push_back("");
    }
  }

  return build_records(image.image_id, platform_of(image.image_id), pairs,
                       texts);
}

ExtractResult run_extract(const PipelineConfig& config) {
  validate(config);
  if (config.input_dir.empty() ||
      !std::filesystem::is_directory(config.input_dir)) {
    throw ConfigError("input_dir is not a readable directory: " +
                      config.input_dir.string());
  }

  const Backends backends = make_backends(config);
  const std::vector<ImageRef> images = list_images(config.input_dir);

  ExtractResult result;
  result.images = images.size();

  std::vector<std::vector<ReviewRecord>> per_image(images.size());
  std::vector<std::string> per_image_error(images.size());

  std::size_t workers = static_cast<std::size_t>(config.workers);
  if (!backends.detector->thread_safe() || !backends.ocr->thread_safe()) {
    workers = 1;
  }
  workers = std::max<std::size_t>(1, std::min(workers, images.size()));

  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= images.size()) break;
      try {
        per_image[i] = process_image(images[i], *backends.detector,
                                     *backends.ocr, config);
      } catch (const std::exception& e) {
        per_image_error[i] = e.what();
      }
    }
  };

  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
  }

  // Merge in listing (image_id) order so worker scheduling cannot leak
  // into the output.
  std::vector<ReviewRecord> merged;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!per_image_error[i].empty()) {
      result.failures.push_back(images[i].image_id + ": " +
                                per_image_error[i]);
      continue;
    }
    merged.insert(merged.end(), per_image[i].begin(), per_image[i].end());
  }
  result.records = dedup(merged, config.jaccard_tau);
  return result;
}

GroundTruthSet load_ground_truth(
    const std::filesystem::path& ground_truth_dir) {
  if (!std::filesystem::is_directory(ground_truth_dir)) {
    throw ConfigError("ground truth dir is not a directory: " +
                      ground_truth_dir.string());
  }
  const std::filesystem::path manifest_path =
      ground_truth_dir / "dimensions.manifest";

  GroundTruthSet set;
  {
    const std::string content = read_text_file(manifest_path);
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.starts_with('#')) continue;
      std::istringstream fields(line);
      std::string image_id;
      long long w = 0, h = 0;
      std::string extra;
      if (!(fields >> image_id >> w >> h) || fields >> extra) {
        throw ParseError(manifest_path.string(), line_no,
                         "expected: image_id width height");
      }
      if (w <= 0 || h <= 0 || w > 1 << 24 || h > 1 << 24) {
        throw ParseError(manifest_path.string(), line_no,
                         "bad image dimensions");
      }
      if (set.dimensions.contains(image_id)) {
        throw ParseError(manifest_path.string(), line_no,
                         "duplicate image_id " + image_id);
      }
      set.dimensions[image_id] =
          ImageSize{static_cast<int>(w), static_cast<int>(h)};
    }
  }

  // Every manifest entry must have an annotation file, and every
  // annotation file must be in the manifest.
  std::set<std::string> annotation_ids;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(ground_truth_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
      continue;
    }
    std::filesystem::path rel =
        std::filesystem::relative(entry.path(), ground_truth_dir);
    rel.replace_extension();
    annotation_ids.insert(rel.generic_string());
  }
  for (const std::string& id : annotation_ids) {
    if (!set.dimensions.contains(id)) {
      throw ParseError("annotation file " + id +
                       ".txt has no dimensions.manifest entry");
    }
  }

  for (const auto& [image_id, size] : set.dimensions) {
    if (!annotation_ids.contains(image_id)) {
      throw ParseError("manifest lists " + image_id +
                       " but no annotation file " + image_id + ".txt exists");
    }
    const std::filesystem::path file = ground_truth_dir / (image_id + ".txt");
    const std::string content = read_text_file(file);
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string stripped = line;
      const auto first = stripped.find_first_not_of(" \t");
      if (first == std::string::npos || stripped[first] == '#') continue;
      try {
        set.boxes.push_back(
            parse_yolo_line(line, image_id, size.width, size.height));
      } catch (const ParseError& e) {
        throw ParseError(file.string(), line_no, e.what());
      }
    }
  }
  return set;
}

std::vector<Detection> load_predictions(
    const std::filesystem::path& predictions_dir,
    const std::map<std::string, ImageSize>& dimensions) {
  if (!std::filesystem::is_directory(predictions_dir)) {
    throw ConfigError("predictions dir is not a directory: " +
                      predictions_dir.string());
  }
  static const std::string kSuffix = ".detections.json";

  std::set<std::string> prediction_ids;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(predictions_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel =
        std::filesystem::relative(entry.path(), predictions_dir)
            .generic_string();
    if (!rel.ends_with(kSuffix)) continue;
    const std::string image_id = rel.substr(0, rel.size() - kSuffix.size());
    if (!dimensions.contains(image_id)) {
      throw ParseError("prediction file " + rel +
                       " has no dimensions.manifest entry");
    }
    prediction_ids.insert(image_id);
  }

  // dimensions is ordered by image_id, which pins the output order.
  std::vector<Detection> preds;
  for (const auto& [image_id, size] : dimensions) {
    if (!prediction_ids.contains(image_id)) continue;  // zero predictions
    const std::filesystem::path file = predictions_dir / (image_id + kSuffix);
    const std::vector<Detection> file_preds =
        parse_detection_file(read_text_file(file), image_id);
    for (const Detection& p : file_preds) {
      if (p.box.x_max > size.width || p.box.y_max > size.height) {
        throw ParseError("prediction box for " + image_id +
                         " extends outside the image");
      }
    }
    preds.insert(preds.end(), file_preds.begin(), file_preds.end());
  }
  return preds;
}

EvaluationReport run_evaluate(const PipelineConfig& config) {
  validate(config);
  const GroundTruthSet gt = load_ground_truth(config.ground_truth_dir);
  const std::vector<Detection> preds =
      load_predictions(config.predictions_dir, gt.dimensions);

  EvaluationSettings settings;
  settings.conf_threshold = config.conf_threshold;
  return evaluate_detections(preds, gt.boxes, settings);
}

void annotate_record(ReviewRecord& record, const Backends& backends,
                     const PipelineConfig& config) {
  if (backends.sentiment) {
    const SentimentResult sentiment = backends.sentiment->classify(record.text);
    record.flags.comment_polarity = sentiment.polarity;
    if (record.stars) {
      record.flags.rating_polarity =
          rating_polarity(*record.stars, config.rating_polarity_map);
      record.flags.sentiment_inconsistent = sentiment_inconsistency(
          *record.flags.rating_polarity, *record.flags.comment_polarity);
    }
  }
  if (backends.language) {
    record.flags.language = backends.language->detect(record.text);
  }
  if (backends.translator) {
    record.flags.translated_text = backends.translator->translate(
        record.text, *record.flags.language, config.target_language);
  }
  if (backends.authenticity) {
    record.flags.authenticity = backends.authenticity->classify(record.text);
  }
}

AnalyzeResult run_analyze(const PipelineConfig& config,
                          const std::vector<ReviewRecord>& records) {
  validate(config);
  const Backends backends = make_backends(config);

  AnalyzeResult result;
  result.annotated = records;
  for (ReviewRecord& record : result.annotated) {
    annotate_record(record, backends, config);
  }
  result.filtered = veracity_filter(result.annotated, config.policy);
  return result;
}

}  // namespace reviewkit
