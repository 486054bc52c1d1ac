#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace reviewkit {

/// Three-valued sentiment label. Ordered so that comparisons follow
/// negative < neutral < positive.
enum class Polarity : int {
  negative = -1,
  neutral = 0,
  positive = 1,
};

enum class Authenticity : int {
  genuine = 0,
  fake = 1,
  unknown = 2,
};

const char* to_string(Polarity p);
const char* to_string(Authenticity a);
std::optional<Polarity> polarity_from_string(std::string_view name);
std::optional<Authenticity> authenticity_from_string(std::string_view name);

/// Per-record analysis annotations. Every field is optional: a stage that
/// did not run leaves its fields absent. sentiment_inconsistent is set
/// only when both polarities are present.
struct AnalysisFlags {
  std::optional<Polarity> comment_polarity;
  std::optional<Polarity> rating_polarity;
  std::optional<bool> sentiment_inconsistent;
  std::optional<std::string> language;  // two-letter code
  std::optional<std::string> translated_text;
  std::optional<Authenticity> authenticity;

  bool empty() const {
    return !comment_polarity && !rating_polarity && !sentiment_inconsistent &&
           !language && !translated_text && !authenticity;
  }

  bool operator==(const AnalysisFlags&) const = default;
};

}  // namespace reviewkit
