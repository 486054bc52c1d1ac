#include "reviewkit/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "reviewkit/text.hpp"

namespace reviewkit {

std::optional<int> stars_of(ObjectClass c) {
  if (c == ObjectClass::review_text) return std::nullopt;
  return static_cast<int>(c) + 1;
}

namespace {

// Sort key covering all geometric fields plus class and confidence, so
// candidate ranking and output ordering never depend on input order.
using BoxKey = std::tuple<double, double, double, double, int, double>;

BoxKey key_of(const Detection& d) {
  return {d.box.y_min, d.box.x_min, d.box.y_max, d.box.x_max,
          static_cast<int>(d.object_class), -d.confidence};
}

struct Candidate {
  double cost;
  std::size_t rating;  // index into ratings
  std::size_t text;    // index into texts
};

}  // namespace

std::vector<AssociatedPair> associate(const std::vector<Detection>& dets) {
  std::vector<Detection> texts;
  std::vector<Detection> ratings;
  for (const Detection& d : dets) {
    if (d.object_class == ObjectClass::review_text) {
      texts.push_back(d);
    } else {
      ratings.push_back(d);
    }
  }
  // Canonical order before pairing makes the result permutation-invariant.
  std::sort(texts.begin(), texts.end(), [](const Detection& a, const Detection& b) {
    return key_of(a) < key_of(b);
  });
  std::sort(ratings.begin(), ratings.end(),
            [](const Detection& a, const Detection& b) {
              return key_of(a) < key_of(b);
            });

  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < ratings.size(); ++r) {
    for (std::size_t t = 0; t < texts.size(); ++t) {
      const BoundingBox& rb = ratings[r].box;
      const BoundingBox& tb = texts[t].box;
      const double gap = vertical_gap(rb, tb);
      if (horizontal_overlap_ratio(rb, tb) >= 0.5 &&
          gap >= -0.5 * rb.height()) {
        candidates.push_back({std::abs(gap), r, t});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              const auto ka = std::make_tuple(ratings[a.rating].box.x_min,
                                              texts[a.text].box.x_min,
                                              key_of(ratings[a.rating]),
                                              key_of(texts[a.text]));
              const auto kb = std::make_tuple(ratings[b.rating].box.x_min,
                                              texts[b.text].box.x_min,
                                              key_of(ratings[b.rating]),
                                              key_of(texts[b.text]));
              return ka < kb;
            });

  std::vector<bool> rating_used(ratings.size(), false);
  std::vector<bool> text_used(texts.size(), false);
  std::vector<std::optional<std::size_t>> rating_of_text(texts.size());
  for (const Candidate& c : candidates) {
    if (rating_used[c.rating] || text_used[c.text]) continue;
    rating_used[c.rating] = true;
    text_used[c.text] = true;
    rating_of_text[c.text] = c.rating;
  }

  std::vector<AssociatedPair> pairs;
  pairs.reserve(texts.size());
  for (std::size_t t = 0; t < texts.size(); ++t) {
    AssociatedPair p{texts[t], std::nullopt};
    if (rating_of_text[t]) p.rating = ratings[*rating_of_text[t]];
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<ReviewRecord> build_records(
    const std::string& image_id, const std::optional<std::string>& platform,
    const std::vector<AssociatedPair>& pairs,
    const std::vector<std::string>& texts) {
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!texts.at(i).empty()) survivors.push_back(i);
  }

  std::vector<BoundingBox> boxes;
  boxes.reserve(survivors.size());
  for (std::size_t i : survivors) boxes.push_back(pairs[i].text.box);
  const std::vector<std::size_t> order = reading_order(boxes);

  std::vector<ReviewRecord> records;
  records.reserve(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const AssociatedPair& pair = pairs[survivors[order[pos]]];
    char suffix[8];
    std::snprintf(suffix, sizeof(suffix), "#%03zu", pos);
    ReviewRecord rec{
        image_id + suffix,
        image_id,
        platform,
        texts[survivors[order[pos]]],
        std::nullopt,
        pair.text.box,
        std::nullopt,
        AnalysisFlags{},
    };
    if (pair.rating) {
      rec.stars = stars_of(pair.rating->object_class);
      rec.rating_box = pair.rating->box;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ReviewRecord> dedup(const std::vector<ReviewRecord>& records,
                                double jaccard_tau) {
  std::vector<ReviewRecord> kept;
  std::vector<std::set<std::string>> kept_tokens;
  for (const ReviewRecord& rec : records) {
    const std::set<std::string> tokens = token_set(rec.text);
    bool duplicate = false;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (kept[k].stars != rec.stars) continue;
      std::size_t inter = 0;
      for (const auto& t : tokens) {
        if (kept_tokens[k].count(t)) ++inter;
      }
      const std::size_t uni = tokens.size() + kept_tokens[k].size() - inter;
      const double jaccard =
          uni == 0 ? 1.0
                   : static_cast<double>(inter) / static_cast<double>(uni);
      if (jaccard >= jaccard_tau) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      kept.push_back(rec);
      kept_tokens.push_back(std::move(tokens));
    }
  }
  return kept;
}

}  // namespace reviewkit
