#ifndef REVMINE_CORPUS_HPP
#define REVMINE_CORPUS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace revmine {

struct Token {
  std::string text;  // never empty, never contains whitespace
  std::string pos;   // empty when untagged
  int index = 0;     // position within the sentence
  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  int sentence_index = 0;  // position within the review
  bool operator==(const Sentence&) const = default;
};

struct Review {
  std::string id;  // unique corpus-wide
  std::string app;
  std::string category;
  int rating = 0;  // 1..5
  std::vector<Sentence> sentences;
  bool operator==(const Review&) const = default;
};

/// One annotated app-feature instance: a consecutive token range
/// [start, end) inside one sentence. end is exclusive.
struct AnnotationSpan {
  std::string annotator;
  std::string review_id;
  int sentence_index = 0;
  int start = 0;
  int end = 0;
  bool operator==(const AnnotationSpan&) const = default;
  auto sort_key() const { return std::tie(annotator, review_id, sentence_index, start, end); }
};

struct Corpus {
  std::vector<Review> reviews;
  // Kept sorted by (annotator, review_id, sentence_index, start); loaders and
  // transformations call canonicalize() to maintain this.
  std::vector<AnnotationSpan> annotations;
  // Provenance only (source, language, ...); not persisted by save_corpus.
  std::map<std::string, std::string> metadata;

  std::set<std::string> annotator_ids() const;
  const Review* find_review(std::string_view id) const;
  bool operator==(const Corpus&) const = default;
};

/// Sorts annotations into canonical order.
void canonicalize(Corpus& corpus);

/// Checks every type invariant (token shape, unique review ids, rating range,
/// span bounds, per-annotator span overlap). Throws DataError on violation.
void validate(const Corpus& corpus);

/// Reviews-and-annotations equality; ignores metadata.
bool content_equal(const Corpus& a, const Corpus& b);

/// Tokens covered by a span, and their space-joined text.
std::vector<std::string> span_words(const Corpus& corpus, const AnnotationSpan& span);
std::string span_text(const Corpus& corpus, const AnnotationSpan& span);

// ---------------------------------------------------------------------------
// BIO sequence labeling

enum class BioTag : unsigned char { B, I, O };

char to_char(BioTag tag);
BioTag bio_from_char(char c);  // throws DataError on anything but B/I/O

struct LabeledSequence {
  std::string review_id;
  int sentence_index = 0;
  std::vector<BioTag> labels;  // one per token
  bool operator==(const LabeledSequence&) const = default;
};

/// One sequence per sentence (span-free sentences included): each span [s,e)
/// becomes B at s and I at s+1..e-1, everything else O.
/// Throws DataError when the annotator has no spans in the corpus.
std::vector<LabeledSequence> bio_encode(const Corpus& corpus, const std::string& annotator);

/// Maximal B(I)* runs become half-open spans. Tolerant of any label list:
/// an I at position 0 or directly after O is repaired to B.
std::vector<std::pair<int, int>> bio_decode(const std::vector<BioTag>& labels);

// ---------------------------------------------------------------------------
// Dataset statistics

struct DatasetStats {
  int n_reviews = 0;
  int n_sentences = 0;
  int feature_tokens = 0;  // span occurrences
  int feature_types = 0;   // distinct stemmed type keys
  int single_word = 0;
  int multi_word = 0;
  double type_token_ratio = 0.0;   // types / tokens, 0 when no tokens
  double features_per_review = 0.0;  // tokens / reviews, 0 when no reviews
  bool operator==(const DatasetStats&) const = default;
};

struct CorpusStats {
  std::map<std::string, DatasetStats> per_category;
  DatasetStats total;
};

/// Maps a span's words to the key its type is counted under.
using TypeKeyFn = std::function<std::string(const std::vector<std::string>&)>;

/// Per-category and total statistics. With an annotator, only that
/// annotator's spans are counted (unknown annotator throws DataError);
/// without one, all spans are pooled. The default key function joins the
/// english stems of the lowercased words.
CorpusStats compute_stats(const Corpus& corpus,
                          const std::optional<std::string>& annotator = std::nullopt,
                          const TypeKeyFn& type_key = {});

// ---------------------------------------------------------------------------
// Stratified sampling

enum class Stratum { rating };

/// Draws per_app reviews for every app, apportioning each app's draw across
/// strata by largest remainder over the pool's stratum proportions.
/// Deterministic given the seed. Throws ConfigError when per_app exceeds an
/// app's pool size.
Corpus stratified_sample(const Corpus& pool, int per_app, Stratum stratum, std::uint32_t seed);

// ---------------------------------------------------------------------------
// Fallback POS tagging

/// Tags every token via an ordered suffix+lexicon heuristic; tokens that
/// already carry a tag keep it. Rule order: existing tag, closed-class
/// lexicon, digit -> CD, no letters -> SYM, -ing -> VBG, -ed -> VBD,
/// -ly -> RB, adjective suffixes -> JJ, initial capital -> NNP,
/// -s (not -ss/-us/-is) -> NNS, default NN.
std::vector<std::string> fallback_pos_tag(const Sentence& sentence);

}  // namespace revmine

#endif  // REVMINE_CORPUS_HPP
