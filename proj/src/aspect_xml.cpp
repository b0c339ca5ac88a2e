#include "revmine/aspect_xml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "revmine/errors.hpp"
#include "revmine/log.hpp"

namespace revmine {
namespace {

std::size_t line_of(const std::string& text, std::size_t offset) {
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(),
                            text.begin() + static_cast<std::ptrdiff_t>(
                                               std::min(offset, text.size())),
                            '\n'));
}

std::string xml_unescape(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out.push_back(raw[i++]);
      continue;
    }
    const std::size_t end = raw.find(';', i);
    if (end == std::string::npos) {
      out.push_back(raw[i++]);
      continue;
    }
    const std::string entity = raw.substr(i + 1, end - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos") out.push_back('\'');
    else if (!entity.empty() && entity[0] == '#') {
      int code = 0;
      const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
      const char* first = entity.data() + (hex ? 2 : 1);
      const char* last = entity.data() + entity.size();
      auto [ptr, ec] = std::from_chars(first, last, code, hex ? 16 : 10);
      if (ec != std::errc() || ptr != last || code < 0 || code > 0x10FFFF) {
        out.append(raw, i, end - i + 1);  // leave unknown references as-is
      } else if (code < 0x80) {
        out.push_back(static_cast<char>(code));
      } else if (code < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (code >> 6)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      } else if (code < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (code >> 12)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (code >> 18)));
        out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      }
    } else {
      out.append(raw, i, end - i + 1);
    }
    i = end + 1;
  }
  return out;
}

/// Value of attribute `name` inside one tag's text, entity-decoded; empty
/// optional when absent.
std::optional<std::string> attribute(const std::string& tag, const std::string& name) {
  const std::string marker = name + "=\"";
  std::size_t at = tag.find(marker);
  while (at != std::string::npos) {
    const char before = at == 0 ? ' ' : tag[at - 1];
    if (before == ' ' || before == '\t' || before == '\n' || before == '\r') break;
    at = tag.find(marker, at + 1);
  }
  if (at == std::string::npos) return std::nullopt;
  const std::size_t start = at + marker.size();
  const std::size_t end = tag.find('"', start);
  if (end == std::string::npos) return std::nullopt;
  return xml_unescape(tag.substr(start, end - start));
}

struct OffsetToken {
  std::string text;
  int begin = 0;  // byte offsets into the decoded sentence text
  int end = 0;
};

bool word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::vector<OffsetToken> tokenize(const std::string& text) {
  std::vector<OffsetToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (word_byte(c)) {
      while (end < text.size() && word_byte(static_cast<unsigned char>(text[end]))) ++end;
    }
    tokens.push_back({text.substr(i, end - i), static_cast<int>(i), static_cast<int>(end)});
    i = end;
  }
  return tokens;
}

int parse_offset(const std::string& value, const std::string& what, std::size_t line) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out < 0) {
    throw ParseError("bad aspect " + what + " offset '" + value + "'", line);
  }
  return out;
}

}  // namespace

Corpus load_aspect_xml(const std::string& path, const std::string& app,
                       const std::string& category) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string xml = buffer.str();

  Corpus corpus;
  corpus.metadata["language"] = "english";
  corpus.metadata["source"] = path;

  std::size_t cursor = 0;
  while (true) {
    const std::size_t open = xml.find("<sentence ", cursor);
    if (open == std::string::npos) break;
    const std::size_t open_end = xml.find('>', open);
    if (open_end == std::string::npos) {
      throw ParseError("unterminated <sentence> tag", line_of(xml, open));
    }
    const std::size_t close = xml.find("</sentence>", open_end);
    if (close == std::string::npos) {
      throw ParseError("missing </sentence>", line_of(xml, open));
    }
    const std::string open_tag = xml.substr(open, open_end - open + 1);
    const std::string block = xml.substr(open_end + 1, close - open_end - 1);
    cursor = close + 11;

    const std::optional<std::string> id = attribute(open_tag, "id");
    if (!id || id->empty()) {
      throw ParseError("<sentence> without an id attribute", line_of(xml, open));
    }

    const std::size_t text_open = block.find("<text>");
    const std::size_t text_close = block.find("</text>");
    if (text_open == std::string::npos || text_close == std::string::npos ||
        text_close < text_open) {
      throw ParseError("<sentence> without a <text> element", line_of(xml, open));
    }
    const std::string decoded =
        xml_unescape(block.substr(text_open + 6, text_close - text_open - 6));
    const std::vector<OffsetToken> tokens = tokenize(decoded);

    Review review;
    review.id = *id;
    review.app = app;
    review.category = category;
    review.rating = 3;  // the format carries no rating; neutral placeholder
    Sentence sentence;
    sentence.sentence_index = 0;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      Token token;
      token.text = tokens[t].text;
      token.index = static_cast<int>(t);
      sentence.tokens.push_back(std::move(token));
    }
    const bool has_tokens = !sentence.tokens.empty();
    if (has_tokens) review.sentences.push_back(std::move(sentence));
    if (!has_tokens) {
      log_warn("sentence '" + *id + "' in '" + path + "' has no tokens; skipped");
      continue;
    }

    std::size_t term_at = block.find("<aspectTerm ");
    while (term_at != std::string::npos) {
      const std::size_t term_end = block.find('>', term_at);
      if (term_end == std::string::npos) {
        throw ParseError("unterminated <aspectTerm> tag", line_of(xml, open));
      }
      const std::string tag = block.substr(term_at, term_end - term_at + 1);
      term_at = block.find("<aspectTerm ", term_end);

      const std::optional<std::string> term = attribute(tag, "term");
      const std::optional<std::string> from = attribute(tag, "from");
      const std::optional<std::string> to = attribute(tag, "to");
      if (!term || !from || !to) {
        throw ParseError("<aspectTerm> needs term, from, and to attributes",
                         line_of(xml, open));
      }
      const int from_at = parse_offset(*from, "from", line_of(xml, open));
      const int to_at = parse_offset(*to, "to", line_of(xml, open));

      int first = -1, last = -1;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (tokens[t].begin == from_at) first = static_cast<int>(t);
        if (tokens[t].end == to_at) last = static_cast<int>(t);
      }
      if (first < 0 || last < first) {
        log_warn("aspect '" + *term + "' at " + *from + ".." + *to + " in sentence '" +
                 *id + "' does not align with token boundaries; dropped");
        continue;
      }
      corpus.annotations.push_back({"gold", *id, 0, first, last + 1});
    }
    corpus.reviews.push_back(std::move(review));
  }

  canonicalize(corpus);
  // Some files repeat an identical term entry; keep one.
  corpus.annotations.erase(
      std::unique(corpus.annotations.begin(), corpus.annotations.end()),
      corpus.annotations.end());
  validate(corpus);
  return corpus;
}

}  // namespace revmine
