#include "revmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "revmine/errors.hpp"
#include "revmine/rng.hpp"
#include "revmine/stemmer.hpp"

namespace revmine {
namespace {

bool has_whitespace(const std::string& s) {
  for (unsigned char c : s)
    if (std::isspace(c)) return true;
  return false;
}

std::string default_type_key(const std::vector<std::string>& words) {
  std::string key;
  for (const auto& w : words) {
    if (!key.empty()) key.push_back(' ');
    key += stem(w, Language::english);
  }
  return key;
}

}  // namespace

std::set<std::string> Corpus::annotator_ids() const {
  std::set<std::string> ids;
  for (const auto& span : annotations) ids.insert(span.annotator);
  return ids;
}

const Review* Corpus::find_review(std::string_view id) const {
  for (const auto& review : reviews)
    if (review.id == id) return &review;
  return nullptr;
}

void canonicalize(Corpus& corpus) {
  std::stable_sort(corpus.annotations.begin(), corpus.annotations.end(),
                   [](const AnnotationSpan& a, const AnnotationSpan& b) {
                     return a.sort_key() < b.sort_key();
                   });
}

void validate(const Corpus& corpus) {
  std::unordered_map<std::string, const Review*> by_id;
  for (const auto& review : corpus.reviews) {
    if (review.id.empty()) throw DataError("review with empty id");
    if (!by_id.emplace(review.id, &review).second)
      throw DataError("duplicate review id '" + review.id + "'");
    if (review.rating < 1 || review.rating > 5)
      throw DataError("review '" + review.id + "' has rating " +
                      std::to_string(review.rating) + " outside 1..5");
    for (std::size_t si = 0; si < review.sentences.size(); ++si) {
      const Sentence& sentence = review.sentences[si];
      if (sentence.sentence_index != static_cast<int>(si))
        throw DataError("review '" + review.id + "' sentence " + std::to_string(si) +
                        " carries index " + std::to_string(sentence.sentence_index));
      for (std::size_t ti = 0; ti < sentence.tokens.size(); ++ti) {
        const Token& token = sentence.tokens[ti];
        if (token.text.empty())
          throw DataError("review '" + review.id + "' has an empty token");
        if (has_whitespace(token.text))
          throw DataError("review '" + review.id + "' token '" + token.text +
                          "' contains whitespace");
        if (token.index != static_cast<int>(ti))
          throw DataError("review '" + review.id + "' token " + std::to_string(ti) +
                          " carries index " + std::to_string(token.index));
      }
    }
  }

  // (annotator, review, sentence) -> intervals, for the overlap check
  std::map<std::tuple<std::string, std::string, int>, std::vector<std::pair<int, int>>> groups;
  for (const auto& span : corpus.annotations) {
    auto it = by_id.find(span.review_id);
    if (it == by_id.end())
      throw DataError("annotation references unknown review '" + span.review_id + "'");
    const Review& review = *it->second;
    if (span.sentence_index < 0 ||
        span.sentence_index >= static_cast<int>(review.sentences.size()))
      throw DataError("annotation in review '" + span.review_id + "' references sentence " +
                      std::to_string(span.sentence_index));
    int n_tokens = static_cast<int>(
        review.sentences[static_cast<std::size_t>(span.sentence_index)].tokens.size());
    if (span.start < 0 || span.start >= span.end || span.end > n_tokens)
      throw DataError("annotation in review '" + span.review_id + "' sentence " +
                      std::to_string(span.sentence_index) + " has bad range [" +
                      std::to_string(span.start) + "," + std::to_string(span.end) +
                      ") over " + std::to_string(n_tokens) + " tokens");
    groups[{span.annotator, span.review_id, span.sentence_index}].emplace_back(span.start,
                                                                               span.end);
  }
  for (auto& [key, intervals] : groups) {
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first < intervals[i - 1].second)
        throw DataError("annotator '" + std::get<0>(key) + "' has overlapping spans in review '" +
                        std::get<1>(key) + "' sentence " + std::to_string(std::get<2>(key)));
    }
  }
}

bool content_equal(const Corpus& a, const Corpus& b) {
  return a.reviews == b.reviews && a.annotations == b.annotations;
}

std::vector<std::string> span_words(const Corpus& corpus, const AnnotationSpan& span) {
  const Review* review = corpus.find_review(span.review_id);
  if (review == nullptr)
    throw DataError("span references unknown review '" + span.review_id + "'");
  const Sentence& sentence = review->sentences.at(static_cast<std::size_t>(span.sentence_index));
  std::vector<std::string> words;
  for (int t = span.start; t < span.end; ++t)
    words.push_back(sentence.tokens[static_cast<std::size_t>(t)].text);
  return words;
}

std::string span_text(const Corpus& corpus, const AnnotationSpan& span) {
  std::string text;
  for (const auto& w : span_words(corpus, span)) {
    if (!text.empty()) text.push_back(' ');
    text += w;
  }
  return text;
}

// ---------------------------------------------------------------------------
// BIO

char to_char(BioTag tag) {
  switch (tag) {
    case BioTag::B: return 'B';
    case BioTag::I: return 'I';
    default: return 'O';
  }
}

BioTag bio_from_char(char c) {
  switch (c) {
    case 'B': return BioTag::B;
    case 'I': return BioTag::I;
    case 'O': return BioTag::O;
    default: throw DataError(std::string("invalid BIO label '") + c + "'");
  }
}

std::vector<LabeledSequence> bio_encode(const Corpus& corpus, const std::string& annotator) {
  auto known = corpus.annotator_ids();
  if (known.find(annotator) == known.end())
    throw DataError("unknown annotator '" + annotator + "'");

  std::vector<LabeledSequence> sequences;
  std::map<std::pair<std::string_view, int>, std::size_t> position;
  for (const auto& review : corpus.reviews) {
    for (const auto& sentence : review.sentences) {
      position[{review.id, sentence.sentence_index}] = sequences.size();
      sequences.push_back({review.id, sentence.sentence_index,
                           std::vector<BioTag>(sentence.tokens.size(), BioTag::O)});
    }
  }
  for (const auto& span : corpus.annotations) {
    if (span.annotator != annotator) continue;
    auto& labels = sequences[position.at({span.review_id, span.sentence_index})].labels;
    labels[static_cast<std::size_t>(span.start)] = BioTag::B;
    for (int t = span.start + 1; t < span.end; ++t)
      labels[static_cast<std::size_t>(t)] = BioTag::I;
  }
  return sequences;
}

std::vector<std::pair<int, int>> bio_decode(const std::vector<BioTag>& labels) {
  std::vector<std::pair<int, int>> spans;
  int start = -1;
  for (int t = 0; t < static_cast<int>(labels.size()); ++t) {
    BioTag tag = labels[static_cast<std::size_t>(t)];
    bool starts_span =
        tag == BioTag::B || (tag == BioTag::I && start < 0);  // stray I repaired to B
    if (starts_span) {
      if (start >= 0) spans.emplace_back(start, t);
      start = t;
    } else if (tag == BioTag::O && start >= 0) {
      spans.emplace_back(start, t);
      start = -1;
    }
  }
  if (start >= 0) spans.emplace_back(start, static_cast<int>(labels.size()));
  return spans;
}

// ---------------------------------------------------------------------------
// Statistics

CorpusStats compute_stats(const Corpus& corpus, const std::optional<std::string>& annotator,
                          const TypeKeyFn& type_key) {
  if (annotator) {
    auto known = corpus.annotator_ids();
    if (known.find(*annotator) == known.end())
      throw DataError("unknown annotator '" + *annotator + "'");
  }
  const TypeKeyFn& key_fn = type_key ? type_key : TypeKeyFn(default_type_key);

  CorpusStats stats;
  std::map<std::string, std::set<std::string>> types_by_category;
  std::set<std::string> types_total;
  std::unordered_map<std::string, const std::string*> category_of;

  for (const auto& review : corpus.reviews) {
    category_of[review.id] = &review.category;
    DatasetStats& cat = stats.per_category[review.category];
    cat.n_reviews += 1;
    cat.n_sentences += static_cast<int>(review.sentences.size());
    stats.total.n_reviews += 1;
    stats.total.n_sentences += static_cast<int>(review.sentences.size());
  }

  for (const auto& span : corpus.annotations) {
    if (annotator && span.annotator != *annotator) continue;
    const std::string& category = *category_of.at(span.review_id);
    DatasetStats& cat = stats.per_category[category];
    std::string key = key_fn(span_words(corpus, span));
    bool single = span.end - span.start == 1;
    cat.feature_tokens += 1;
    (single ? cat.single_word : cat.multi_word) += 1;
    types_by_category[category].insert(key);
    stats.total.feature_tokens += 1;
    (single ? stats.total.single_word : stats.total.multi_word) += 1;
    types_total.insert(key);
  }

  auto finish = [](DatasetStats& s, int n_types) {
    s.feature_types = n_types;
    s.type_token_ratio =
        s.feature_tokens == 0 ? 0.0 : static_cast<double>(s.feature_types) / s.feature_tokens;
    s.features_per_review =
        s.n_reviews == 0 ? 0.0 : static_cast<double>(s.feature_tokens) / s.n_reviews;
  };
  for (auto& [category, cat] : stats.per_category)
    finish(cat, static_cast<int>(types_by_category[category].size()));
  finish(stats.total, static_cast<int>(types_total.size()));
  return stats;
}

// ---------------------------------------------------------------------------
// Stratified sampling

Corpus stratified_sample(const Corpus& pool, int per_app, Stratum stratum, std::uint32_t seed) {
  (void)stratum;  // rating is the only stratum
  if (per_app < 0) throw ConfigError("per_app must be non-negative");

  std::map<std::string, std::vector<std::size_t>> by_app;
  for (std::size_t i = 0; i < pool.reviews.size(); ++i)
    by_app[pool.reviews[i].app].push_back(i);

  auto rng = make_rng(seed);
  std::vector<char> selected(pool.reviews.size(), 0);

  for (auto& [app, indices] : by_app) {
    int pool_size = static_cast<int>(indices.size());
    if (per_app > pool_size)
      throw ConfigError("per_app " + std::to_string(per_app) + " exceeds pool size " +
                        std::to_string(pool_size) + " for app '" + app + "'");

    std::vector<std::vector<std::size_t>> per_rating(6);
    for (std::size_t i : indices)
      per_rating[static_cast<std::size_t>(pool.reviews[i].rating)].push_back(i);

    // Largest-remainder apportionment of per_app across ratings.
    int quota[6] = {0};
    std::vector<std::pair<int, int>> remainders;  // (-remainder, rating): sort ascending
    int assigned = 0;
    for (int r = 1; r <= 5; ++r) {
      long long num = static_cast<long long>(per_app) * per_rating[static_cast<std::size_t>(r)].size();
      quota[r] = static_cast<int>(num / pool_size);
      remainders.emplace_back(-static_cast<int>(num % pool_size), r);
      assigned += quota[r];
    }
    std::sort(remainders.begin(), remainders.end());
    for (int extra = per_app - assigned, i = 0; extra > 0; --extra, ++i)
      quota[remainders[static_cast<std::size_t>(i)].second] += 1;

    for (int r = 1; r <= 5; ++r) {
      auto& candidates = per_rating[static_cast<std::size_t>(r)];
      deterministic_shuffle(candidates, rng);
      for (int pick = 0; pick < quota[r]; ++pick)
        selected[candidates[static_cast<std::size_t>(pick)]] = 1;
    }
  }

  Corpus sample;
  sample.metadata = pool.metadata;
  std::set<std::string> kept_ids;
  for (std::size_t i = 0; i < pool.reviews.size(); ++i) {
    if (selected[i]) {
      sample.reviews.push_back(pool.reviews[i]);
      kept_ids.insert(pool.reviews[i].id);
    }
  }
  for (const auto& span : pool.annotations)
    if (kept_ids.count(span.review_id)) sample.annotations.push_back(span);
  canonicalize(sample);
  return sample;
}

// ---------------------------------------------------------------------------
// Fallback POS tagging

namespace {

const std::unordered_map<std::string, std::string>& closed_class_lexicon() {
  static const std::unordered_map<std::string, std::string> lexicon = {
      {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"},
      {"these", "DT"}, {"those", "DT"}, {"to", "TO"}, {"and", "CC"}, {"or", "CC"},
      {"but", "CC"}, {"nor", "CC"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"},
      {"of", "IN"}, {"for", "IN"}, {"with", "IN"}, {"from", "IN"}, {"by", "IN"},
      {"about", "IN"}, {"into", "IN"}, {"over", "IN"}, {"after", "IN"}, {"before", "IN"},
      {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"},
      {"we", "PRP"}, {"they", "PRP"}, {"me", "PRP"}, {"him", "PRP"}, {"us", "PRP"},
      {"them", "PRP"}, {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"}, {"her", "PRP$"},
      {"its", "PRP$"}, {"our", "PRP$"}, {"their", "PRP$"}, {"is", "VBZ"}, {"are", "VBP"},
      {"am", "VBP"}, {"was", "VBD"}, {"were", "VBD"}, {"be", "VB"}, {"been", "VBN"},
      {"being", "VBG"}, {"not", "RB"}, {"very", "RB"}, {"can", "MD"}, {"will", "MD"},
      {"would", "MD"}, {"could", "MD"}, {"should", "MD"}, {"may", "MD"}, {"might", "MD"},
      {"must", "MD"},
  };
  return lexicon;
}

bool ends_with(const std::string& s, std::string_view suffix, std::size_t min_extra) {
  return s.size() >= suffix.size() + min_extra &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string heuristic_tag(const std::string& text) {
  std::string lower;
  lower.reserve(text.size());
  bool any_letter = false;
  bool any_digit = false;
  for (unsigned char c : text) {
    if (std::isalpha(c)) any_letter = true;
    if (std::isdigit(c)) any_digit = true;
    lower.push_back(static_cast<char>(std::tolower(c)));
  }

  auto& lexicon = closed_class_lexicon();
  if (auto it = lexicon.find(lower); it != lexicon.end()) return it->second;
  if (any_digit) return "CD";
  if (!any_letter) return "SYM";
  if (ends_with(lower, "ing", 2)) return "VBG";
  if (ends_with(lower, "ed", 2)) return "VBD";
  if (ends_with(lower, "ly", 2)) return "RB";
  for (std::string_view suffix : {"ful", "ous", "ive", "able", "ible", "ish", "less", "ic", "al"})
    if (ends_with(lower, suffix, 2)) return "JJ";
  if (std::isupper(static_cast<unsigned char>(text[0]))) return "NNP";
  if (ends_with(lower, "s", 2) && !ends_with(lower, "ss", 1) && !ends_with(lower, "us", 1) &&
      !ends_with(lower, "is", 1))
    return "NNS";
  return "NN";
}

}  // namespace

std::vector<std::string> fallback_pos_tag(const Sentence& sentence) {
  std::vector<std::string> tags;
  tags.reserve(sentence.tokens.size());
  for (const Token& token : sentence.tokens)
    tags.push_back(token.pos.empty() ? heuristic_tag(token.text) : token.pos);
  return tags;
}

}  // namespace revmine
