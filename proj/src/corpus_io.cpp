#include "revmine/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <vector>

#include <json.hpp>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

using ordered_json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// JSONL

const ordered_json& require(const ordered_json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(std::string("missing key '") + key + "'", line);
  return *it;
}

Corpus load_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json review_obj;
    try {
      review_obj = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      Review review;
      review.id = require(review_obj, "id", line_no).get<std::string>();
      review.app = require(review_obj, "app", line_no).get<std::string>();
      review.category = require(review_obj, "category", line_no).get<std::string>();
      review.rating = require(review_obj, "rating", line_no).get<int>();
      for (const auto& sentence_obj : require(review_obj, "sentences", line_no)) {
        Sentence sentence;
        sentence.sentence_index = static_cast<int>(review.sentences.size());
        for (const auto& token_obj : require(sentence_obj, "tokens", line_no)) {
          Token token;
          token.text = require(token_obj, "t", line_no).get<std::string>();
          if (auto it = token_obj.find("pos"); it != token_obj.end())
            token.pos = it->get<std::string>();
          token.index = static_cast<int>(sentence.tokens.size());
          sentence.tokens.push_back(std::move(token));
        }
        review.sentences.push_back(std::move(sentence));
      }
      if (auto it = review_obj.find("annotations"); it != review_obj.end()) {
        for (const auto& span_obj : *it) {
          AnnotationSpan span;
          span.annotator = require(span_obj, "annotator", line_no).get<std::string>();
          span.review_id = review.id;
          span.sentence_index = require(span_obj, "sentence", line_no).get<int>();
          span.start = require(span_obj, "start", line_no).get<int>();
          span.end = require(span_obj, "end", line_no).get<int>();
          corpus.annotations.push_back(std::move(span));
        }
      }
      corpus.reviews.push_back(std::move(review));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad field type: ") + e.what(), line_no);
    }
  }
  return corpus;
}

void save_jsonl(const Corpus& corpus, std::ostream& out) {
  // Canonical span order, grouped per review.
  std::map<std::string_view, std::vector<const AnnotationSpan*>> spans_of;
  std::vector<AnnotationSpan> spans = corpus.annotations;
  std::stable_sort(spans.begin(), spans.end(),
                   [](const AnnotationSpan& a, const AnnotationSpan& b) {
                     return a.sort_key() < b.sort_key();
                   });
  for (const auto& span : spans) spans_of[span.review_id].push_back(&span);

  for (const auto& review : corpus.reviews) {
    ordered_json review_obj;
    review_obj["id"] = review.id;
    review_obj["app"] = review.app;
    review_obj["category"] = review.category;
    review_obj["rating"] = review.rating;
    ordered_json sentences = ordered_json::array();
    for (const auto& sentence : review.sentences) {
      ordered_json tokens = ordered_json::array();
      for (const auto& token : sentence.tokens) {
        ordered_json token_obj;
        token_obj["t"] = token.text;
        if (!token.pos.empty()) token_obj["pos"] = token.pos;
        tokens.push_back(std::move(token_obj));
      }
      ordered_json sentence_obj;
      sentence_obj["tokens"] = std::move(tokens);
      sentences.push_back(std::move(sentence_obj));
    }
    review_obj["sentences"] = std::move(sentences);
    ordered_json annotations = ordered_json::array();
    if (auto it = spans_of.find(review.id); it != spans_of.end()) {
      for (const AnnotationSpan* span : it->second) {
        ordered_json span_obj;
        span_obj["annotator"] = span->annotator;
        span_obj["sentence"] = span->sentence_index;
        span_obj["start"] = span->start;
        span_obj["end"] = span->end;
        annotations.push_back(std::move(span_obj));
      }
    }
    review_obj["annotations"] = std::move(annotations);
    out << review_obj.dump() << '\n';
  }
}

// --------------------------------------------------------------------------
// CoNLL TSV

// Header values may contain spaces but not the literal " key=" markers,
// which appear in this fixed order.
constexpr const char* kHeaderKeys[] = {" app=", " category=", " rating=", " annotator="};

void parse_review_header(const std::string& line, std::size_t line_no, Review& review,
                         std::string& annotator) {
  constexpr std::string_view prefix = "#review id=";
  if (line.compare(0, prefix.size(), prefix) != 0)
    throw ParseError("expected '#review id=...'", line_no);
  std::size_t cuts[5];
  std::size_t from = prefix.size();
  for (int i = 0; i < 4; ++i) {
    cuts[i] = line.find(kHeaderKeys[i], from);
    if (cuts[i] == std::string::npos)
      throw ParseError(std::string("missing '") + kHeaderKeys[i] + "' in review header", line_no);
    from = cuts[i] + 1;
  }
  cuts[4] = line.size();
  review.id = line.substr(prefix.size(), cuts[0] - prefix.size());
  std::string values[4];
  for (int i = 0; i < 4; ++i) {
    std::size_t value_begin = cuts[i] + std::string(kHeaderKeys[i]).size();
    values[i] = line.substr(value_begin, cuts[i + 1] - value_begin);
  }
  review.app = values[0];
  review.category = values[1];
  try {
    review.rating = std::stoi(values[2]);
  } catch (const std::exception&) {
    throw ParseError("rating is not an integer: '" + values[2] + "'", line_no);
  }
  annotator = values[3];
}

struct ConllState {
  Corpus corpus;
  Review review;
  std::string annotator;
  bool in_review = false;
  std::vector<Token> tokens;
  std::vector<BioTag> labels;
  int repairs = 0;

  void flush_sentence() {
    if (tokens.empty()) return;
    Sentence sentence;
    sentence.sentence_index = static_cast<int>(review.sentences.size());
    sentence.tokens = std::move(tokens);
    tokens.clear();

    for (std::size_t t = 0; t < labels.size(); ++t)
      if (labels[t] == BioTag::I && (t == 0 || labels[t - 1] == BioTag::O)) ++repairs;
    for (auto [start, end] : bio_decode(labels)) {
      AnnotationSpan span;
      span.annotator = annotator;
      span.review_id = review.id;
      span.sentence_index = sentence.sentence_index;
      span.start = start;
      span.end = end;
      corpus.annotations.push_back(std::move(span));
    }
    labels.clear();
    review.sentences.push_back(std::move(sentence));
  }

  void flush_review() {
    flush_sentence();
    if (in_review) corpus.reviews.push_back(std::move(review));
    review = Review{};
    in_review = false;
  }
};

Corpus load_conll(std::istream& in) {
  ConllState state;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      state.flush_sentence();
      continue;
    }
    if (line.rfind("#review", 0) == 0) {
      state.flush_review();
      parse_review_header(line, line_no, state.review, state.annotator);
      state.in_review = true;
      continue;
    }
    if (!state.in_review)
      throw ParseError("token line before any '#review' header", line_no);
    std::size_t tab1 = line.find('\t');
    std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos)
      throw ParseError("expected exactly 3 tab-separated columns (TOKEN POS BIO)", line_no);
    std::string text = line.substr(0, tab1);
    std::string pos = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string label = line.substr(tab2 + 1);
    if (label.size() != 1)
      throw ParseError("BIO column must be a single character, got '" + label + "'", line_no);
    Token token;
    token.text = std::move(text);
    token.pos = pos == "_" ? "" : pos;
    token.index = static_cast<int>(state.tokens.size());
    state.tokens.push_back(std::move(token));
    try {
      state.labels.push_back(bio_from_char(label[0]));
    } catch (const DataError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  state.flush_review();
  if (state.repairs > 0)
    state.corpus.metadata["bio_repairs"] = std::to_string(state.repairs);
  return state.corpus;
}

void save_conll(const Corpus& corpus, std::ostream& out) {
  auto annotators = corpus.annotator_ids();
  if (annotators.size() > 1)
    throw ConfigError("CoNLL holds one annotator per file; this corpus has " +
                      std::to_string(annotators.size()) + " (save as jsonl instead)");
  std::string annotator = annotators.empty() ? "_" : *annotators.begin();

  // (review_id, sentence) -> labels
  std::map<std::pair<std::string_view, int>, std::vector<BioTag>> labels_of;
  for (const auto& review : corpus.reviews)
    for (const auto& sentence : review.sentences)
      labels_of[{review.id, sentence.sentence_index}] =
          std::vector<BioTag>(sentence.tokens.size(), BioTag::O);
  for (const auto& span : corpus.annotations) {
    auto& labels = labels_of.at({span.review_id, span.sentence_index});
    labels[static_cast<std::size_t>(span.start)] = BioTag::B;
    for (int t = span.start + 1; t < span.end; ++t)
      labels[static_cast<std::size_t>(t)] = BioTag::I;
  }

  for (const auto& review : corpus.reviews) {
    out << "#review id=" << review.id << " app=" << review.app << " category="
        << review.category << " rating=" << review.rating << " annotator=" << annotator << '\n';
    for (const auto& sentence : review.sentences) {
      const auto& labels = labels_of.at({review.id, sentence.sentence_index});
      for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
        const Token& token = sentence.tokens[t];
        out << token.text << '\t' << (token.pos.empty() ? "_" : token.pos) << '\t'
            << to_char(labels[t]) << '\n';
      }
      out << '\n';
    }
  }
}

}  // namespace

CorpusFormat parse_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "conll") return CorpusFormat::conll;
  throw ConfigError("unknown corpus format: '" + std::string(name) +
                    "' (expected 'jsonl' or 'conll')");
}

CorpusFormat detect_format(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "jsonl") return CorpusFormat::jsonl;
  if (ext == "conll" || ext == "tsv") return CorpusFormat::conll;
  throw ConfigError("cannot infer corpus format from '" + path +
                    "' (use .jsonl, .conll or .tsv, or pass the format explicitly)");
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  Corpus corpus = format == CorpusFormat::jsonl ? load_jsonl(in) : load_conll(in);
  validate(corpus);
  canonicalize(corpus);
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == CorpusFormat::jsonl)
    save_jsonl(corpus, out);
  else
    save_conll(corpus, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace revmine
