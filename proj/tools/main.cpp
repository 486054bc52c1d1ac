// reviewkit command line: extract review records from screenshot
// directories, evaluate detector output against annotations, and run the
// post-extraction analyses. Data goes to files; logs go to stderr.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "reviewkit/config.hpp"
#include "reviewkit/errors.hpp"
#include "reviewkit/pipeline.hpp"
#include "reviewkit/record_io.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitPartial = 1;  // some images failed and were skipped
constexpr int kExitFatal = 2;

struct CommonArgs {
  std::string config_path;
  std::string input;
  std::string output;
  std::string annotated;
  std::string predictions;
  std::string ground_truth;
  int workers = 0;
  bool drop_inconsistent = false;
  bool drop_fake = false;
};

reviewkit::PipelineConfig build_config(const CommonArgs& args) {
  reviewkit::PipelineConfig config;
  if (!args.config_path.empty()) {
    config = reviewkit::load_config(args.config_path);
  }
  if (args.workers > 0) config.workers = args.workers;
  if (args.drop_inconsistent) config.policy.drop_inconsistent = true;
  if (args.drop_fake) config.policy.drop_fake = true;
  return config;
}

void require_path(const std::filesystem::path& path, const char* what) {
  if (path.empty()) {
    throw reviewkit::ConfigError(std::string(what) +
                                 " required (flag or config key)");
  }
}

int run_extract_command(const CommonArgs& args) {
  reviewkit::PipelineConfig config = build_config(args);
  if (!args.input.empty()) config.input_dir = args.input;
  if (!args.output.empty()) config.output_records = args.output;
  require_path(config.input_dir, "--input directory");
  require_path(config.output_records, "--output record file");

  const reviewkit::ExtractResult result = reviewkit::run_extract(config);
  reviewkit::write_records_file(config.output_records, result.records);

  for (const std::string& failure : result.failures) {
    std::cerr << "warning: skipped " << failure << "\n";
  }
  std::cerr << "extract: " << result.images << " images, "
            << result.records.size() << " records, " << result.failures.size()
            << " failures -> " << config.output_records.string() << "\n";
  return result.failures.empty() ? kExitClean : kExitPartial;
}

int run_evaluate_command(const CommonArgs& args) {
  reviewkit::PipelineConfig config = build_config(args);
  if (!args.predictions.empty()) config.predictions_dir = args.predictions;
  if (!args.ground_truth.empty()) config.ground_truth_dir = args.ground_truth;
  if (!args.output.empty()) config.output_report = args.output;
  require_path(config.predictions_dir, "--predictions directory");
  require_path(config.ground_truth_dir, "--ground-truth directory");
  require_path(config.output_report, "--output report file");

  const reviewkit::EvaluationReport report = reviewkit::run_evaluate(config);
  reviewkit::write_text_file(config.output_report,
                             reviewkit::serialize_report(report));

  char line[128];
  std::snprintf(line, sizeof(line),
                "evaluate: map %.4f, review-text precision %.4f (tp %d, fp "
                "%d, fn %d)",
                report.map_score, report.review_text_precision, report.tp,
                report.fp, report.fn);
  std::cerr << line << " -> " << config.output_report.string() << "\n";
  return kExitClean;
}

int run_analyze_command(const CommonArgs& args) {
  reviewkit::PipelineConfig config = build_config(args);
  if (!args.input.empty()) config.input_records = args.input;
  if (!args.output.empty()) config.output_filtered = args.output;
  if (!args.annotated.empty()) config.output_annotated = args.annotated;
  require_path(config.input_records, "--input record file");
  require_path(config.output_filtered, "--output filtered record file");
  require_path(config.output_annotated, "--annotated record file");

  const std::vector<reviewkit::ReviewRecord> records =
      reviewkit::read_records_file(config.input_records);
  const reviewkit::AnalyzeResult result =
      reviewkit::run_analyze(config, records);
  reviewkit::write_records_file(config.output_annotated, result.annotated);
  reviewkit::write_records_file(config.output_filtered, result.filtered);

  std::size_t inconsistent = 0;
  std::size_t fake = 0;
  for (const reviewkit::ReviewRecord& record : result.annotated) {
    if (record.flags.sentiment_inconsistent.value_or(false)) ++inconsistent;
    if (record.flags.authenticity == reviewkit::Authenticity::fake) ++fake;
  }
  std::cerr << "analyze: " << result.annotated.size() << " records, "
            << inconsistent << " inconsistent, " << fake << " fake, "
            << result.annotated.size() - result.filtered.size()
            << " dropped, " << result.filtered.size() << " kept -> "
            << config.output_filtered.string() << "\n";
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reviewkit: structured review records from review-page screenshots"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* extract = app.add_subcommand(
      "extract", "Detect, read and assemble review records from images");
  extract->add_option("--config", args.config_path, "Config file");
  extract->add_option("--input", args.input, "Image directory");
  extract->add_option("--output", args.output, "Record file to write");
  extract->add_option("--workers", args.workers, "Worker thread count");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score detection files against annotations");
  evaluate->add_option("--config", args.config_path, "Config file");
  evaluate->add_option("--predictions", args.predictions,
                       "Directory of detection files");
  evaluate->add_option("--ground-truth", args.ground_truth,
                       "Directory of annotations + dimensions.manifest");
  evaluate->add_option("--output", args.output, "Report file to write");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Annotate records and apply the veracity filter");
  analyze->add_option("--config", args.config_path, "Config file");
  analyze->add_option("--input", args.input, "Record file to read");
  analyze->add_option("--output", args.output, "Filtered record file to write");
  analyze->add_option("--annotated", args.annotated,
                      "Annotated record file to write");
  analyze->add_flag("--drop-inconsistent", args.drop_inconsistent,
                    "Drop records whose rating and comment sentiment clash");
  analyze->add_flag("--drop-fake", args.drop_fake,
                    "Drop records classified as fake");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (extract->parsed()) return run_extract_command(args);
    if (evaluate->parsed()) return run_evaluate_command(args);
    if (analyze->parsed()) return run_analyze_command(args);
    std::cerr << "error: no subcommand\n";
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
}
