#ifndef REVMINE_STEMMER_HPP
#define REVMINE_STEMMER_HPP

#include <string>
#include <string_view>

namespace revmine {

/// Stemming backends. `none` is an identity fallback for languages without
/// a supported stemmer; it still lowercases so type keys stay case-folded.
enum class Language { english, none };

/// Maps "english"/"none" to Language. Throws ConfigError on anything else.
Language parse_language(std::string_view name);

std::string to_string(Language language);

/// Reduces a single word to its stem. ASCII letters are lowercased first;
/// non-ASCII bytes pass through untouched. For english this is the classic
/// Porter suffix-stripping algorithm (with the common reference-code
/// refinements: bli->ble, logi->log, words of length <= 2 left alone).
std::string stem(std::string_view word, Language language = Language::english);

}  // namespace revmine

#endif  // REVMINE_STEMMER_HPP
