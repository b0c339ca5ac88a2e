#include "revmine/features.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "revmine/errors.hpp"
#include "revmine/log.hpp"

namespace revmine {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

/// Byte offsets where UTF-8 code points start, plus a final end-of-string
/// entry. Stray continuation or invalid lead bytes count as one code point
/// each so malformed input still yields well-defined affixes.
std::vector<std::size_t> codepoint_starts(const std::string& s) {
  std::vector<std::size_t> starts;
  std::size_t i = 0;
  while (i < s.size()) {
    starts.push_back(i);
    unsigned char lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((lead & 0xE0) == 0xC0) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0) len = 4;
    std::size_t j = i + 1;
    while (j < s.size() && j < i + len &&
           (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) {
      ++j;
    }
    i = j;
  }
  starts.push_back(s.size());
  return starts;
}

std::string offset_tag(int o) {
  if (o > 0) return "+" + std::to_string(o);
  return std::to_string(o);
}

void add_stylistics(const std::string& text, FeatureVector& out) {
  bool has_letter = false, all_caps = true;
  bool has_digit = false, has_symbol = false, all_alnum = !text.empty();
  for (unsigned char c : text) {
    if (std::isalpha(c)) {
      has_letter = true;
      if (!std::isupper(c)) all_caps = false;
    }
    if (std::isdigit(c)) has_digit = true;
    if (!std::isalnum(c)) {
      has_symbol = true;
      all_alnum = false;
    }
  }
  if (!text.empty() && std::isupper(static_cast<unsigned char>(text[0]))) {
    out.binary.push_back("style[0]=init_cap");
  }
  if (has_letter && all_caps) out.binary.push_back("style[0]=all_caps");
  if (has_digit) out.binary.push_back("style[0]=has_digit");
  if (has_symbol) out.binary.push_back("style[0]=has_symbol");
  if (all_alnum) out.binary.push_back("style[0]=alnum");
}

}  // namespace

const std::vector<double>* EmbeddingTable::lookup(const std::string& word) const {
  auto it = vectors.find(lowercase_lookup ? ascii_lower(word) : word);
  return it == vectors.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings file '" + path + "'");

  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;  // blank line

    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("non-numeric embedding value '" + field + "'", line_no);
      }
      values.push_back(v);
    }

    // `N D` header: first line of exactly two integers and an integer "word".
    if (first_content_line && values.size() == 1) {
      int declared = 0;
      auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), declared);
      if (ec == std::errc() && ptr == word.data() + word.size()) {
        first_content_line = false;
        continue;
      }
    }
    first_content_line = false;

    if (values.empty()) {
      throw ParseError("embedding line has no values for word '" + word + "'", line_no);
    }
    if (table.dim == 0) {
      table.dim = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != table.dim) {
      throw ParseError("embedding dimension " + std::to_string(values.size()) +
                           " disagrees with earlier lines (" +
                           std::to_string(table.dim) + ")",
                       line_no);
    }
    auto [it, inserted] = table.vectors.insert_or_assign(word, std::move(values));
    if (!inserted) {
      log_warn("duplicate embedding for '" + word + "', keeping the later one");
    }
  }
  return table;
}

FeatureVector extract_features(const Sentence& sentence, int t,
                               const FeatureTemplateConfig& config,
                               const EmbeddingTable* embeddings) {
  const int n = static_cast<int>(sentence.tokens.size());
  if (t < 0 || t >= n) throw ConfigError("token index out of range");

  FeatureVector out;
  for (int o = -config.window; o <= config.window; ++o) {
    const int p = t + o;
    const std::string tag = offset_tag(o);
    if (p < 0 || p >= n) {
      out.binary.push_back("w[" + tag + "]=<PAD>");
      continue;
    }
    const Token& tok = sentence.tokens[p];
    out.binary.push_back("w[" + tag + "]=" + ascii_lower(tok.text));
    if (config.use_pos && !tok.pos.empty()) {
      out.binary.push_back("pos[" + tag + "]=" + tok.pos);
    }
  }

  const std::string& text = sentence.tokens[t].text;
  const std::string lowered = ascii_lower(text);
  const auto starts = codepoint_starts(lowered);
  const int word_len = static_cast<int>(starts.size()) - 1;
  for (int len : config.affix_lengths) {
    if (len < 1 || len > 4 || len > word_len) continue;
    out.binary.push_back("pre" + std::to_string(len) +
                         "[0]=" + lowered.substr(0, starts[len]));
    out.binary.push_back("suf" + std::to_string(len) +
                         "[0]=" + lowered.substr(starts[word_len - len]));
  }

  if (config.use_position) {
    const char* where = t == 0 ? "first" : (t == n - 1 ? "last" : "inner");
    out.binary.push_back(std::string("pos_in_sent=") + where);
  }
  if (config.use_stylistics) add_stylistics(text, out);

  if (config.use_embeddings && embeddings != nullptr) {
    const std::vector<double>* vec = embeddings->lookup(text);
    for (int d = 0; d < embeddings->dim; ++d) {
      out.continuous.emplace_back("emb[" + std::to_string(d) + "]",
                                  vec != nullptr ? (*vec)[d] : 0.0);
    }
  }
  return out;
}

}  // namespace revmine
