#include "reviewkit/analyze.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "reviewkit/errors.hpp"
#include "reviewkit/text.hpp"

namespace reviewkit {

const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::negative:
      return "negative";
    case Polarity::neutral:
      return "neutral";
    case Polarity::positive:
      return "positive";
  }
  throw std::invalid_argument("invalid polarity value");
}

const char* to_string(Authenticity a) {
  switch (a) {
    case Authenticity::genuine:
      return "genuine";
    case Authenticity::fake:
      return "fake";
    case Authenticity::unknown:
      return "unknown";
  }
  throw std::invalid_argument("invalid authenticity value");
}

std::optional<Polarity> polarity_from_string(std::string_view name) {
  if (name == "negative") return Polarity::negative;
  if (name == "neutral") return Polarity::neutral;
  if (name == "positive") return Polarity::positive;
  return std::nullopt;
}

std::optional<Authenticity> authenticity_from_string(std::string_view name) {
  if (name == "genuine") return Authenticity::genuine;
  if (name == "fake") return Authenticity::fake;
  if (name == "unknown") return Authenticity::unknown;
  return std::nullopt;
}

const RatingPolarityMap& default_rating_polarity_map() {
  static const RatingPolarityMap map = {
      {1, Polarity::negative}, {2, Polarity::negative}, {3, Polarity::neutral},
      {4, Polarity::positive}, {5, Polarity::positive},
  };
  return map;
}

Polarity rating_polarity(int stars, const RatingPolarityMap& map) {
  const auto it = map.find(stars);
  if (it == map.end()) {
    throw std::invalid_argument("no polarity mapping for " +
                                std::to_string(stars) + " stars");
  }
  return it->second;
}

Polarity rating_polarity(int stars) {
  return rating_polarity(stars, default_rating_polarity_map());
}

bool sentiment_inconsistency(Polarity rating_pol, Polarity comment_pol) {
  return rating_pol != Polarity::neutral && comment_pol != Polarity::neutral &&
         rating_pol != comment_pol;
}

const Lexicon& builtin_lexicon() {
  static const Lexicon lexicon = {
      // positive
      {"amazing",     "awesome",   "beautiful", "best",        "brilliant",
       "clean",       "comfortable", "delicious", "easy",      "excellent",
       "fantastic",   "fast",      "friendly",  "good",        "great",
       "happy",       "helpful",   "love",      "loved",       "lovely",
       "nice",        "perfect",   "pleased",   "recommend",   "recommended",
       "reliable",    "satisfied", "superb",    "value",       "wonderful",
       "works"},
      // negative
      {"annoying",    "awful",     "bad",       "broke",       "broken",
       "crashes",     "crashing",  "damaged",   "defective",   "dirty",
       "disappointed", "disappointing", "faulty", "horrible",  "late",
       "missing",     "noisy",     "poor",      "problem",     "problems",
       "refund",      "rude",      "scam",      "slow",        "stopped",
       "terrible",    "unusable",  "useless",   "waste",       "worst",
       "wrong"},
  };
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open lexicon file " + path.string());
  }

  Lexicon lexicon;
  std::set<std::string>* section = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (tokens.size() > 1) {
      throw ParseError(path.string(), line_no, "expected one token per line");
    }
    const std::string& word = tokens.front();
    if (word == "[positive]") {
      section = &lexicon.positive;
    } else if (word == "[negative]") {
      section = &lexicon.negative;
    } else if (word.starts_with('[')) {
      throw ParseError(path.string(), line_no, "unknown section " + word);
    } else if (section == nullptr) {
      throw ParseError(path.string(), line_no, "token before any section");
    } else {
      section->insert(casefold(word));
    }
  }
  return lexicon;
}

LexiconSentiment::LexiconSentiment() : lexicon_(builtin_lexicon()) {}

LexiconSentiment::LexiconSentiment(Lexicon lexicon)
    : lexicon_(std::move(lexicon)) {}

SentimentResult LexiconSentiment::classify(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("cannot classify empty text");
  }
  int pos = 0;
  int neg = 0;
  for (const std::string& token : word_tokens(text)) {
    if (lexicon_.positive.contains(token)) ++pos;
    if (lexicon_.negative.contains(token)) ++neg;
  }
  SentimentResult result;
  result.score = static_cast<double>(pos - neg) /
                 static_cast<double>(std::max(1, pos + neg));
  result.polarity = result.score > 0.0   ? Polarity::positive
                    : result.score < 0.0 ? Polarity::negative
                                         : Polarity::neutral;
  return result;
}

namespace {

const std::vector<std::pair<std::string, std::set<std::string>>>&
language_tables() {
  static const std::vector<std::pair<std::string, std::set<std::string>>>
      tables = {
          {"en",
           {"the", "a",   "an",  "is",   "are",  "was",  "were", "this",
            "that", "it",  "and", "or",   "but",  "of",   "to",   "in",
            "on",   "for", "with", "as",  "at",   "by",   "from", "has",
            "have", "had", "not", "be",   "been", "they", "we",   "you",
            "i",    "he",  "she", "my",   "your", "so"}},
          {"fr",
           {"le",  "la",  "les", "un",   "une",  "des",  "de",   "du",
            "ce",  "cette", "est", "et",  "je",   "tu",   "il",   "elle",
            "nous", "vous", "ils", "très", "bien", "pas",  "ne",   "que",
            "qui", "pour", "avec", "sur", "mais", "son",  "sa",   "ses",
            "à",   "au"}},
          {"es",
           {"el",  "los", "las", "es",   "y",    "pero", "del",  "en",
            "no",  "por", "con", "para", "muy",  "este", "esta", "yo",
            "él",  "ella", "su", "sus",  "al",   "lo",   "mi",   "más",
            "se",  "me",  "te",  "nos",  "qué",  "como", "todo", "bueno"}},
          {"de",
           {"der", "die", "das", "ein",  "eine", "ist",  "und",  "oder",
            "aber", "nicht", "ich", "du", "er",   "sie",  "wir",  "ihr",
            "mit", "für", "auf", "von",  "zu",   "im",   "den",  "dem",
            "sehr", "gut", "war", "hat", "haben", "bin",  "sind", "auch"}},
          {"it",
           {"il",  "gli", "è",   "e",    "ma",   "di",   "che",  "non",
            "per", "con", "su",  "questo", "questa", "io", "lui", "lei",
            "noi", "voi", "molto", "bene", "era", "ho",   "ha",   "sono",
            "come", "più", "anche", "della", "nel", "alla", "dal", "mi"}},
          {"pt",
           {"o",   "os",  "as",  "um",   "uma",  "é",    "ou",   "mas",
            "do",  "da",  "em",  "não",  "por",  "com",  "para", "muito",
            "este", "esta", "eu", "ele",  "ela",  "nós",  "meu",  "minha",
            "foi", "tem", "são", "uns",  "umas", "nos",  "pelo", "pela"}},
      };
  return tables;
}

}  // namespace

const std::vector<std::string>& known_languages() {
  static const std::vector<std::string> codes = [] {
    std::vector<std::string> v;
    for (const auto& [code, words] : language_tables()) v.push_back(code);
    return v;
  }();
  return codes;
}

std::string HeuristicLanguage::detect(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("cannot detect language of empty text");
  }
  const std::vector<std::string> tokens = word_tokens(text);

  std::string best_code = "en";
  int best_hits = 0;
  for (const auto& [code, words] : language_tables()) {
    int hits = 0;
    for (const std::string& token : tokens) {
      if (words.contains(token)) ++hits;
    }
    if (hits > best_hits) {  // ties keep the earlier table
      best_hits = hits;
      best_code = code;
    }
  }
  return best_code;
}

namespace {

void require_known_codes(const std::string& source, const std::string& target,
                         const std::string& backend) {
  const auto& codes = known_languages();
  for (const std::string& code : {source, target}) {
    if (std::find(codes.begin(), codes.end(), code) == codes.end()) {
      throw BackendError(backend + " translator: unknown language code '" +
                         code + "'");
    }
  }
}

}  // namespace

std::string PassthroughTranslator::translate(const std::string& text,
                                             const std::string& source,
                                             const std::string& target) const {
  require_known_codes(source, target, name());
  if (source == target) return text;
  return "[" + source + "->" + target + "] " + text;
}

FixtureTranslator::FixtureTranslator(const std::filesystem::path& table_path)
    : table_(load_lookup_table(table_path)) {}

std::string FixtureTranslator::translate(const std::string& text,
                                         const std::string& source,
                                         const std::string& target) const {
  require_known_codes(source, target, name());
  if (source == target) return text;
  const auto it = table_.find(text);
  if (it == table_.end()) {
    throw BackendError("fixture translator has no entry for \"" + text + "\"");
  }
  return it->second;
}

Authenticity UnknownAuthenticity::classify(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("cannot classify empty text");
  }
  return Authenticity::unknown;
}

FixtureAuthenticity::FixtureAuthenticity(
    const std::filesystem::path& table_path)
    : table_(load_lookup_table(table_path)) {
  for (const auto& [input, output] : table_) {
    if (!authenticity_from_string(output)) {
      throw ParseError(table_path.string(), 0,
                       "bad authenticity label '" + output + "'");
    }
  }
}

Authenticity FixtureAuthenticity::classify(const std::string& text) const {
  if (text.empty()) {
    throw std::invalid_argument("cannot classify empty text");
  }
  const auto it = table_.find(text);
  if (it == table_.end()) return Authenticity::unknown;
  return *authenticity_from_string(it->second);
}

std::map<std::string, std::string> load_lookup_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open lookup table " + path.string());
  }

  std::map<std::string, std::string> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string(), line_no, "expected input<TAB>output");
    }
    std::string input = line.substr(0, tab);
    std::string output = line.substr(tab + 1);
    if (table.contains(input)) {
      throw ParseError(path.string(), line_no,
                       "duplicate entry \"" + input + "\"");
    }
    table.emplace(std::move(input), std::move(output));
  }
  return table;
}

std::vector<ReviewRecord> veracity_filter(
    const std::vector<ReviewRecord>& records, const VeracityPolicy& policy) {
  std::vector<ReviewRecord> kept;
  kept.reserve(records.size());
  for (const ReviewRecord& record : records) {
    bool drop = false;
    if (policy.drop_inconsistent) {
      if (record.flags.sentiment_inconsistent.has_value()) {
        drop = drop || *record.flags.sentiment_inconsistent;
      } else if (record.stars.has_value()) {
        // Starless records can never carry the flag; anything else
        // missing it was simply never analyzed.
        throw MissingFlagError("record " + record.record_id + " in " +
                               record.image_id +
                               " has no sentiment_inconsistent flag");
      }
    }
    if (policy.drop_fake) {
      if (!record.flags.authenticity.has_value()) {
        throw MissingFlagError("record " + record.record_id + " in " +
                               record.image_id + " has no authenticity flag");
      }
      drop = drop || *record.flags.authenticity == Authenticity::fake;
    }
    if (!drop) kept.push_back(record);
  }
  return kept;
}

}  // namespace reviewkit
