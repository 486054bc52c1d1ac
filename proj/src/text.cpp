#include "reviewkit/text.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace reviewkit {

std::string casefold(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (i < normalized.size()) {
    while (i < normalized.size() && is_space(normalized[i])) ++i;
    std::size_t start = i;
    while (i < normalized.size() && !is_space(normalized[i])) ++i;
    if (i > start) tokens.emplace_back(normalized.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string> word_tokens(std::string_view normalized) {
  std::vector<std::string> out;
  for (const std::string& raw : tokenize(casefold(normalized))) {
    icu::UnicodeString s = icu::UnicodeString::fromUTF8(raw);
    int32_t begin = 0;
    int32_t end = s.countChar32();
    while (begin < end && !u_isalnum(s.char32At(s.moveIndex32(0, begin)))) {
      ++begin;
    }
    while (end > begin && !u_isalnum(s.char32At(s.moveIndex32(0, end - 1)))) {
      --end;
    }
    if (begin >= end) continue;
    const int32_t start_units = s.moveIndex32(0, begin);
    const int32_t end_units = s.moveIndex32(0, end);
    icu::UnicodeString trimmed(s, start_units, end_units - start_units);
    std::string token;
    trimmed.toUTF8String(token);
    out.push_back(std::move(token));
  }
  return out;
}

std::set<std::string> token_set(std::string_view normalized) {
  std::set<std::string> set;
  for (auto& t : tokenize(casefold(normalized))) set.insert(std::move(t));
  return set;
}

double token_jaccard(std::string_view a_normalized,
                     std::string_view b_normalized) {
  const std::set<std::string> a = token_set(a_normalized);
  const std::set<std::string> b = token_set(b_normalized);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : a) {
    if (b.count(t)) ++inter;
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace reviewkit
