#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace reviewkit {

/// Unicode case folding (full, locale-independent).
std::string casefold(std::string_view text);

/// Whitespace-delimited tokens of an already normalized string.
std::vector<std::string> tokenize(std::string_view normalized);

/// Casefolded tokens with non-alphanumeric edges trimmed; empty tokens
/// dropped. Used by the lexicon and language analyzers.
std::vector<std::string> word_tokens(std::string_view normalized);

/// Token-set Jaccard similarity of two casefolded normalized texts.
/// Tokens are whitespace-delimited. Two empty token sets compare as 1.
double token_jaccard(std::string_view a_normalized,
                     std::string_view b_normalized);

/// Casefolded whitespace-token set, the unit dedup compares on.
std::set<std::string> token_set(std::string_view normalized);

}  // namespace reviewkit
