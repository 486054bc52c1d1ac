#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reviewkit/analysis_flags.hpp"
#include "reviewkit/assemble.hpp"

namespace reviewkit {

/// Star rating → polarity. Keys absent from the map are rejected, so a
/// custom map can deliberately narrow the accepted range.
using RatingPolarityMap = std::map<int, Polarity>;

/// 1,2 → negative; 3 → neutral; 4,5 → positive.
const RatingPolarityMap& default_rating_polarity_map();

/// Throws std::invalid_argument when stars has no entry in the map.
Polarity rating_polarity(int stars, const RatingPolarityMap& map);
Polarity rating_polarity(int stars);

/// True iff both polarities are non-neutral and they disagree. Symmetric.
bool sentiment_inconsistency(Polarity rating_pol, Polarity comment_pol);

struct SentimentResult {
  Polarity polarity = Polarity::neutral;
  double score = 0.0;  // in [-1, 1]

  bool operator==(const SentimentResult&) const = default;
};

class SentimentBackend {
 public:
  virtual ~SentimentBackend() = default;

  /// Throws std::invalid_argument on empty text, BackendError on failure.
  virtual SentimentResult classify(const std::string& text) const = 0;
  virtual bool thread_safe() const = 0;
  virtual std::string name() const = 0;
};

struct Lexicon {
  std::set<std::string> positive;
  std::set<std::string> negative;
};

/// Small built-in opinion-word list, casefolded.
const Lexicon& builtin_lexicon();

/// Reads a lexicon file: one token per line under `[positive]` /
/// `[negative]` section headers; blank lines and `#` comments ignored.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Counts casefolded word tokens against the lexicon.
/// score = (pos - neg) / max(1, pos + neg); polarity is the sign.
class LexiconSentiment : public SentimentBackend {
 public:
  LexiconSentiment();  // built-in lexicon
  explicit LexiconSentiment(Lexicon lexicon);

  SentimentResult classify(const std::string& text) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "lexicon"; }

 private:
  Lexicon lexicon_;
};

class LanguageBackend {
 public:
  virtual ~LanguageBackend() = default;

  /// Returns a two-letter code. Throws std::invalid_argument on empty text.
  virtual std::string detect(const std::string& text) const = 0;
  virtual bool thread_safe() const = 0;
  virtual std::string name() const = 0;
};

/// Two-letter codes the built-in language tables cover.
const std::vector<std::string>& known_languages();

/// Stop-word voting over the built-in tables; ties resolve to the earlier
/// entry of known_languages(); no hits at all falls back to "en".
class HeuristicLanguage : public LanguageBackend {
 public:
  std::string detect(const std::string& text) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "heuristic"; }
};

class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;

  /// Must be the identity whenever source == target.
  /// Throws BackendError on unknown codes or missing translations.
  virtual std::string translate(const std::string& text,
                                const std::string& source,
                                const std::string& target) const = 0;
  virtual bool thread_safe() const = 0;
  virtual std::string name() const = 0;
};

/// Identity for source == target; otherwise prefixes a `[src->tgt]`
/// marker so downstream consumers can see no real translation happened.
class PassthroughTranslator : public TranslatorBackend {
 public:
  std::string translate(const std::string& text, const std::string& source,
                        const std::string& target) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "passthrough"; }
};

/// Looks translations up in a `input<TAB>output` table; a text missing
/// from the table is a BackendError.
class FixtureTranslator : public TranslatorBackend {
 public:
  explicit FixtureTranslator(const std::filesystem::path& table_path);

  std::string translate(const std::string& text, const std::string& source,
                        const std::string& target) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "fixture"; }

 private:
  std::map<std::string, std::string> table_;
};

class AuthenticityBackend {
 public:
  virtual ~AuthenticityBackend() = default;

  /// Throws std::invalid_argument on empty text, BackendError on failure.
  virtual Authenticity classify(const std::string& text) const = 0;
  virtual bool thread_safe() const = 0;
  virtual std::string name() const = 0;
};

/// Stub backend: every review is unknown. Real classifiers plug in
/// through the same contract.
class UnknownAuthenticity : public AuthenticityBackend {
 public:
  Authenticity classify(const std::string& text) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "unknown"; }
};

/// `input<TAB>output` table with outputs genuine/fake/unknown; a text
/// missing from the table classifies as unknown.
class FixtureAuthenticity : public AuthenticityBackend {
 public:
  explicit FixtureAuthenticity(const std::filesystem::path& table_path);

  Authenticity classify(const std::string& text) const override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "fixture"; }

 private:
  std::map<std::string, std::string> table_;
};

/// Parses a UTF-8 `input<TAB>output` lookup table. Blank lines and `#`
/// comments are ignored; a line without a tab is a ParseError; duplicate
/// inputs are a ParseError.
std::map<std::string, std::string> load_lookup_table(
    const std::filesystem::path& path);

struct VeracityPolicy {
  bool drop_inconsistent = false;
  bool drop_fake = false;
};

/// Drops records flagged inconsistent (when drop_inconsistent) or fake
/// (when drop_fake); order is preserved. An enabled axis whose flag is
/// absent raises MissingFlagError — except that records without stars are
/// exempt from the inconsistency axis, since they can never carry the flag.
std::vector<ReviewRecord> veracity_filter(
    const std::vector<ReviewRecord>& records, const VeracityPolicy& policy);

}  // namespace reviewkit
