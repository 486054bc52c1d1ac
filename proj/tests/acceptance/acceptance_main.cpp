// Acceptance gate: one checkable criterion per numbered entry, each
// printing a single PASS/FAIL line. Run `acceptance all <cli> <fixtures>`
// for the whole gate or `acceptance <n> <cli> <fixtures>` for one entry.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reviewkit/analyze.hpp"
#include "reviewkit/assemble.hpp"
#include "reviewkit/detect.hpp"
#include "reviewkit/evaluate.hpp"
#include "reviewkit/geometry.hpp"
#include "reviewkit/pipeline.hpp"
#include "reviewkit/recognize.hpp"
#include "reviewkit/record_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace reviewkit;

namespace {

std::string g_cli;      // path to the command-line binary
fs::path g_fixtures;    // path to the bundled fixture corpus

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

// ---------------------------------------------------------------- helpers

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("rk_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string command = g_cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

struct RandomScene {
  std::vector<Detection> preds;
  std::vector<GroundTruthBox> gts;
};

RandomScene random_scene(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_images(1, 3);
  std::uniform_int_distribution<int> n_boxes(0, 10);
  std::uniform_int_distribution<int> cls(0, 5);
  std::uniform_real_distribution<double> conf(0.0, 1.0);

  RandomScene scene;
  const int images = n_images(rng);
  for (int i = 0; i < images; ++i) {
    const std::string image = "img_" + std::to_string(i);
    const int gts = n_boxes(rng);
    for (int g = 0; g < gts; ++g) {
      scene.gts.push_back(GroundTruthBox{
          image, *class_from_code(cls(rng)), oracle::random_box(rng, 100.0)});
    }
    const int preds = n_boxes(rng);
    for (int p = 0; p < preds; ++p) {
      BoundingBox b = oracle::random_box(rng, 100.0);
      ObjectClass c = *class_from_code(cls(rng));
      if (!scene.gts.empty() && (rng() & 1u)) {
        std::uniform_int_distribution<std::size_t> pick(0,
                                                        scene.gts.size() - 1);
        const GroundTruthBox& base = scene.gts[pick(rng)];
        std::uniform_real_distribution<double> jitter(-4.0, 4.0);
        const double dx = std::max(jitter(rng), -base.box.x_min);
        const double dy = std::max(jitter(rng), -base.box.y_min);
        b = BoundingBox(base.box.x_min + dx, base.box.y_min + dy,
                        base.box.x_max + dx, base.box.y_max + dy);
        c = base.object_class;
      }
      scene.preds.push_back(Detection{image, c, conf(rng), b});
    }
  }
  return scene;
}

// Columns of alternating rating/text blocks; columns never overlap
// horizontally, so every candidate edge stays inside one vertical stack.
std::vector<Detection> random_column_layout(std::mt19937& rng,
                                            std::vector<BoundingBox>* ratings,
                                            std::vector<BoundingBox>* texts) {
  std::uniform_int_distribution<int> columns(1, 3);
  std::uniform_int_distribution<int> blocks(1, 3);
  std::uniform_real_distribution<double> gap(1.0, 60.0);
  std::uniform_real_distribution<double> height(8.0, 40.0);

  std::vector<Detection> dets;
  double x = 0.0;
  const int n_columns = columns(rng);
  for (int c = 0; c < n_columns && ratings->size() < 6 && texts->size() < 6;
       ++c) {
    const double width = 120.0;
    double y = gap(rng);
    const int n_blocks = blocks(rng);
    for (int b = 0; b < n_blocks && ratings->size() < 6 && texts->size() < 6;
         ++b) {
      const double rh = height(rng) / 2.0;
      dets.push_back(Detection{"img", ObjectClass::rating_5, 0.9,
                               BoundingBox(x, y, x + width, y + rh)});
      ratings->push_back(dets.back().box);
      y += rh + gap(rng);
      const double th = height(rng);
      dets.push_back(Detection{"img", ObjectClass::review_text, 0.9,
                               BoundingBox(x, y, x + width, y + th)});
      texts->push_back(dets.back().box);
      y += th + gap(rng);
    }
    x += width + 50.0;
  }
  return dets;
}

// ---------------------------------------------------------------- criteria

// Scoring matches brute-force reference implementations on randomized
// synthetic instances.
void criterion_metric_oracles() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240818);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomScene scene = random_scene(rng);

    for (int code = 0; code < 6; ++code) {
      const ObjectClass cls = *class_from_code(code);
      const auto fast = average_precision(scene.preds, scene.gts, cls, 0.5);
      const auto slow =
          oracle::naive_average_precision(scene.preds, scene.gts, cls, 0.5);
      require(fast.has_value() == slow.has_value(),
              "AP defined-ness diverged from the reference");
      if (fast)
        require(std::abs(*fast - *slow) <= 1e-9,
                "AP diverged from the reference by more than 1e-9");
    }

    const double fast_map = mean_ap(scene.preds, scene.gts);
    const double slow_map = oracle::naive_mean_ap(scene.preds, scene.gts);
    require(std::abs(fast_map - slow_map) <= 1e-9,
            "mAP diverged from the reference by more than 1e-9");

    const PrecisionResult fast_p =
        precision_review_text(scene.preds, scene.gts, 0.8, 0.8);
    const oracle::NaivePrecision slow_p = oracle::naive_review_text_precision(
        scene.preds, scene.gts, 0.8, 0.8);
    require(std::abs(fast_p.precision - slow_p.precision) <= 1e-9 &&
                fast_p.tp == slow_p.tp && fast_p.fp == slow_p.fp &&
                fast_p.fn == slow_p.fn,
            "review-text precision diverged from the reference");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(seconds < 30.0, "oracle sweep exceeded its 30 s budget");
}

// The bundled prediction set that copies the annotations scores a perfect
// report, exactly.
void criterion_perfect_detector() {
  PipelineConfig config;
  config.ground_truth_dir = g_fixtures / "eval" / "gt";
  config.predictions_dir = g_fixtures / "eval" / "preds_perfect";
  const EvaluationReport report = run_evaluate(config);
  require(report.map_score == 1.0, "mAP is not exactly 1.0");
  require(report.review_text_precision == 1.0,
          "review-text precision is not exactly 1.0");
  require(report.fp == 0 && report.fn == 0, "spurious fp/fn in perfect run");
}

// Continuous overlap-over-union equals unit-cell counting on integer boxes.
void criterion_integer_iou() {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coord(0, 100);
  int done = 0;
  while (done < 1000) {
    int ax0 = coord(rng), ax1 = coord(rng);
    int ay0 = coord(rng), ay1 = coord(rng);
    int bx0 = coord(rng), bx1 = coord(rng);
    int by0 = coord(rng), by1 = coord(rng);
    if (ax0 > ax1) std::swap(ax0, ax1);
    if (ay0 > ay1) std::swap(ay0, ay1);
    if (bx0 > bx1) std::swap(bx0, bx1);
    if (by0 > by1) std::swap(by0, by1);
    if (ax0 == ax1 || ay0 == ay1 || bx0 == bx1 || by0 == by1) continue;
    ++done;
    const BoundingBox a(ax0, ay0, ax1, ay1), b(bx0, by0, bx1, by1);
    const double counted =
        oracle::cell_counting_iou(ax0, ay0, ax1, ay1, bx0, by0, bx1, by1);
    require(iou(a, b) == counted,
            "continuous and cell-counted overlap disagree");
  }
}

// Greedy rating-text pairing is optimal on stacked layouts and always
// injective and order-free.
void criterion_association() {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<BoundingBox> ratings, texts;
    std::vector<Detection> dets;
    const bool stacked = trial % 2 == 0;
    if (stacked) {
      dets = random_column_layout(rng, &ratings, &texts);
    } else {
      std::uniform_int_distribution<int> count(0, 6);
      const int nr = count(rng), nt = count(rng);
      for (int i = 0; i < nr; ++i) {
        ratings.push_back(oracle::random_box(rng, 150.0));
        dets.push_back(Detection{"img", ObjectClass::rating_3, 0.9,
                                 ratings.back()});
      }
      for (int i = 0; i < nt; ++i) {
        texts.push_back(oracle::random_box(rng, 150.0));
        dets.push_back(Detection{"img", ObjectClass::review_text, 0.9,
                                 texts.back()});
      }
    }

    const auto pairs = associate(dets);
    require(pairs.size() == texts.size(), "one pair per text is missing");

    double total = 0.0;
    int assigned = 0;
    std::vector<BoundingBox> used;
    for (const AssociatedPair& p : pairs) {
      if (!p.rating) continue;
      ++assigned;
      total += std::abs(vertical_gap(p.rating->box, p.text.box));
      require(oracle::candidate_ref(p.rating->box, p.text.box),
              "paired boxes violate the candidate rule");
      for (const BoundingBox& u : used)
        require(!(u == p.rating->box), "a rating was assigned twice");
      used.push_back(p.rating->box);
    }

    if (stacked) {
      const oracle::BestAssignment best =
          oracle::exhaustive_best_assignment(ratings, texts);
      require(assigned == best.cardinality,
              "stacked layout paired fewer reviews than optimal");
      require(std::abs(total - best.total_cost) <= 1e-9,
              "stacked layout total gap is not the exhaustive minimum");
    }

    std::vector<Detection> shuffled = dets;
    for (int s = 0; s < 3; ++s) {
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      require(associate(shuffled) == pairs,
              "pairing depends on detection order");
    }
  }
}

// The bundled two-review page yields exactly one inconsistency flag, on
// the 4-star record, and dropping leaves exactly one record.
void criterion_rating_text_disagreement() {
  TempDir tmp("inconsistency");
  const fs::path records = tmp.path / "records.jsonl";
  const fs::path annotated = tmp.path / "annotated.jsonl";
  const fs::path filtered = tmp.path / "filtered.jsonl";

  require(run_cli("extract --input " + (g_fixtures / "inconsistency").string() +
                  " --output " + records.string()) == 0,
          "extract over the two-review page failed");
  require(run_cli("analyze --input " + records.string() +
                  " --drop-inconsistent --annotated " + annotated.string() +
                  " --output " + filtered.string()) == 0,
          "analyze over the two-review page failed");

  const auto all = read_records_file(annotated);
  require(all.size() == 2, "expected exactly two records on the page");
  int flagged = 0;
  for (const ReviewRecord& r : all) {
    require(r.flags.sentiment_inconsistent.has_value(),
            "a record is missing its consistency flag");
    if (*r.flags.sentiment_inconsistent) {
      ++flagged;
      require(r.stars == 4, "the flagged record is not the 4-star one");
    }
  }
  require(flagged == 1, "expected exactly one inconsistent record");

  const auto kept = read_records_file(filtered);
  require(kept.size() == 1, "dropping inconsistent records should leave one");
  require(kept[0].stars == 5, "the surviving record should be the 5-star one");
}

// Extraction and analysis over the corpus are byte-stable across repeated
// runs and worker counts, and the cross-frame duplicate collapses.
void criterion_determinism() {
  const std::string extract_conf =
      (g_fixtures / "config" / "extract.conf").string();
  const std::string analyze_conf =
      (g_fixtures / "config" / "analyze.conf").string();

  std::string reference_records, reference_annotated, reference_filtered;
  for (const int workers : {1, 4}) {
    for (int repeat = 0; repeat < 5; ++repeat) {
      TempDir tmp("det_" + std::to_string(workers) + "_" +
                  std::to_string(repeat));
      const fs::path records = tmp.path / "records.jsonl";
      const fs::path annotated = tmp.path / "annotated.jsonl";
      const fs::path filtered = tmp.path / "filtered.jsonl";
      require(run_cli("extract --config " + extract_conf + " --workers " +
                      std::to_string(workers) + " --output " +
                      records.string()) == 0,
              "extract run failed");
      require(run_cli("analyze --config " + analyze_conf + " --input " +
                      records.string() + " --annotated " + annotated.string() +
                      " --output " + filtered.string()) == 0,
              "analyze run failed");
      const std::string r = slurp(records), a = slurp(annotated),
                        f = slurp(filtered);
      if (reference_records.empty()) {
        reference_records = r;
        reference_annotated = a;
        reference_filtered = f;
      } else {
        require(r == reference_records, "records differ across runs");
        require(a == reference_annotated, "annotations differ across runs");
        require(f == reference_filtered, "filtered output differs across runs");
      }
    }
  }

  const auto records = parse_records(reference_records, "records");
  int battery_phone = 0;
  for (const ReviewRecord& r : records) {
    if (r.text ==
        "Great phone works perfectly and the battery lasts for days") {
      ++battery_phone;
    }
  }
  require(battery_phone == 1, "the cross-frame duplicate did not collapse");
}

// Interchange formats survive parse -> serialize -> parse unchanged, and
// the normalized annotation form scales exactly.
void criterion_round_trips() {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> cls(0, 5);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      dets.push_back(Detection{"img", *class_from_code(cls(rng)), conf(rng),
                               oracle::random_box(rng, 500.0)});
    }
    const std::string bytes = serialize_detections(dets);
    const auto back = parse_detection_file(bytes, "img");
    require(back == dets, "detections changed across a round trip");
    require(serialize_detections(back) == bytes,
            "detection bytes changed across a round trip");
  }

  for (const char* name : {"golden/records.jsonl", "golden/annotated.jsonl",
                           "golden/filtered.jsonl"}) {
    const std::string bytes = slurp(g_fixtures / name);
    const auto records = parse_records(bytes, name);
    require(serialize_records(records) == bytes,
            std::string("record file did not round-trip: ") + name);
  }

  const std::string report_bytes =
      slurp(g_fixtures / "eval" / "expected_report.json");
  const EvaluationReport report = parse_report(report_bytes);
  require(serialize_report(report) == report_bytes,
          "evaluation report did not round-trip");

  const GroundTruthBox b = parse_yolo_line("5 0.5 0.5 0.2 0.1", "img",
                                           1000, 2000);
  require(b.object_class == ObjectClass::review_text &&
              b.box.x_min == 400.0 && b.box.y_min == 900.0 &&
              b.box.x_max == 600.0 && b.box.y_max == 1100.0,
          "normalized annotation line did not scale exactly");
}

// The documented invariants hold under fresh randomization, quickly.
void criterion_invariants() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(123321);
  std::uniform_int_distribution<int> cls(0, 5);
  std::uniform_real_distribution<double> conf(0.0, 1.0);

  auto random_dets = [&](int max_n) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng() % (max_n + 1));
    for (int i = 0; i < n; ++i) {
      dets.push_back(Detection{(rng() & 1u) ? "a" : "b",
                               *class_from_code(cls(rng)), conf(rng),
                               oracle::random_box(rng, 60.0)});
    }
    return dets;
  };

  auto is_subsequence = [](const std::vector<Detection>& sub,
                           const std::vector<Detection>&all) {
    std::size_t cursor = 0;
    for (const Detection& d : sub) {
      while (cursor < all.size() && !(all[cursor] == d)) ++cursor;
      if (cursor == all.size()) return false;
      ++cursor;
    }
    return true;
  };

  for (int trial = 0; trial < 300; ++trial) {
    const auto dets = random_dets(14);
    std::uniform_real_distribution<double> tau_pick(0.05, 0.95);
    const double tau = tau_pick(rng);

    // suppression keeps a subsequence whose same-class same-image
    // survivors pairwise clear the threshold, and is idempotent
    const auto kept = nms(dets, tau);
    require(is_subsequence(kept, dets), "suppression reordered detections");
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].image_id == kept[j].image_id &&
            kept[i].object_class == kept[j].object_class) {
          require(iou(kept[i].box, kept[j].box) < tau,
                  "suppression left an overlapping pair");
        }
      }
    }
    require(nms(kept, tau) == kept, "suppression is not idempotent");

    // the confidence cut is a monotone idempotent subsequence filter
    const double cut = conf(rng);
    const auto strong = filter_confidence(dets, cut);
    require(is_subsequence(strong, dets), "confidence cut reordered");
    for (const Detection& d : strong)
      require(d.confidence >= cut, "confidence cut kept a weak detection");
    require(filter_confidence(strong, cut) == strong,
            "confidence cut is not idempotent");
    require(filter_confidence(strong, cut / 2.0) == strong,
            "a looser cut after a stricter one changed the result");
  }

  // text normalization is idempotent over messy strings
  std::uniform_int_distribution<int> len(0, 24);
  const std::string alphabet = "ab YZ\t\n\r.!?";
  for (int trial = 0; trial < 300; ++trial) {
    std::string s;
    const int n = len(rng);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
    s += "é";  // exercise the non-ASCII path every time
    const std::string once = normalize_text(s);
    require(normalize_text(once) == once, "normalization is not idempotent");
  }

  // dedup and the veracity filter are idempotent subsequence filters
  const std::vector<std::string> pool = {
      "good value for money", "good  value for money", "terrible battery",
      "works great", "arrived late but fine"};
  auto random_records = [&]() {
    std::vector<ReviewRecord> records;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const int n = static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
      const bool starred = rng() & 1u;
      ReviewRecord r{"id" + std::to_string(i),
                     "img",
                     std::nullopt,
                     pool[pick(rng)],
                     starred ? std::optional<int>(1 + int(rng() % 5))
                             : std::nullopt,
                     BoundingBox(0, 0, 10, 10),
                     std::nullopt,
                     AnalysisFlags{}};
      if (starred) r.rating_box = BoundingBox(0, 0, 5, 5);
      r.flags.comment_polarity = Polarity::neutral;
      if (starred) {
        r.flags.rating_polarity = rating_polarity(*r.stars);
        r.flags.sentiment_inconsistent = (rng() % 3 == 0);
      }
      r.flags.authenticity =
          (rng() % 4 == 0) ? Authenticity::fake : Authenticity::unknown;
      records.push_back(std::move(r));
    }
    return records;
  };
  auto record_subsequence = [](const std::vector<ReviewRecord>& sub,
                               const std::vector<ReviewRecord>& all) {
    std::size_t cursor = 0;
    for (const ReviewRecord& r : sub) {
      while (cursor < all.size() && !(all[cursor] == r)) ++cursor;
      if (cursor == all.size()) return false;
      ++cursor;
    }
    return true;
  };
  VeracityPolicy policy;
  policy.drop_inconsistent = true;
  policy.drop_fake = true;
  for (int trial = 0; trial < 300; ++trial) {
    const auto records = random_records();
    const auto unique = dedup(records, 0.9);
    require(record_subsequence(unique, records), "dedup reordered records");
    require(dedup(unique, 0.9) == unique, "dedup is not idempotent");

    const auto kept = veracity_filter(records, policy);
    require(record_subsequence(kept, records), "the filter reordered records");
    require(veracity_filter(kept, policy) == kept,
            "the filter is not idempotent");
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(seconds < 60.0, "invariant sweep exceeded its 60 s budget");
}

// Regression (not part of the numbered gate): the command-line pipeline
// reproduces the committed golden outputs byte for byte.
void regression_goldens() {
  TempDir tmp("golden");
  const fs::path records = tmp.path / "records.jsonl";
  const fs::path annotated = tmp.path / "annotated.jsonl";
  const fs::path filtered = tmp.path / "filtered.jsonl";
  const fs::path report = tmp.path / "report.json";

  require(run_cli("extract --config " +
                  (g_fixtures / "config" / "extract.conf").string() +
                  " --output " + records.string()) == 0,
          "extract failed");
  require(run_cli("analyze --config " +
                  (g_fixtures / "config" / "analyze.conf").string() +
                  " --input " + records.string() + " --annotated " +
                  annotated.string() + " --output " + filtered.string()) == 0,
          "analyze failed");
  require(run_cli("evaluate --config " +
                  (g_fixtures / "config" / "evaluate.conf").string() +
                  " --output " + report.string()) == 0,
          "evaluate failed");

  require(slurp(records) == slurp(g_fixtures / "golden" / "records.jsonl"),
          "records.jsonl diverged from the golden copy");
  require(slurp(annotated) == slurp(g_fixtures / "golden" / "annotated.jsonl"),
          "annotated.jsonl diverged from the golden copy");
  require(slurp(filtered) == slurp(g_fixtures / "golden" / "filtered.jsonl"),
          "filtered.jsonl diverged from the golden copy");
  require(slurp(report) == slurp(g_fixtures / "eval" / "expected_report.json"),
          "report diverged from the golden copy");
}

struct Criterion {
  std::string id;
  std::string label;
  std::function<void()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> kList = {
      {"1", "metric oracle equivalence on 1000 random instances",
       criterion_metric_oracles},
      {"2", "perfect predictions score exactly 1.0", criterion_perfect_detector},
      {"3", "integer-box overlap equals cell counting on 1000 pairs",
       criterion_integer_iou},
      {"4", "pairing optimal on stacks, injective and order-free everywhere",
       criterion_association},
      {"5", "two-review page flags exactly the 4-star record",
       criterion_rating_text_disagreement},
      {"6", "byte-identical output across 5 runs and worker counts {1,4}",
       criterion_determinism},
      {"7", "interchange round-trips and exact annotation scaling",
       criterion_round_trips},
      {"8", "documented invariants hold under fresh randomization",
       criterion_invariants},
      {"goldens", "command-line outputs match the committed goldens",
       regression_goldens},
  };
  return kList;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <1..8|goldens|all> <cli-binary> "
                 "<fixtures-dir>\n";
    return 2;
  }
  const std::string which = argv[1];
  g_cli = argv[2];
  g_fixtures = argv[3];

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (which != "all" && which != c.id) continue;
    const std::string tag =
        c.id == "goldens" ? "regression" : ("criterion " + c.id);
    try {
      c.run();
      std::cout << "PASS  " << tag << ": " << c.label << "\n";
    } catch (const std::exception& e) {
      std::cout << "FAIL  " << tag << ": " << c.label << " -- " << e.what()
                << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
