#include "revmine/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::istringstream in(key);
  std::string part;
  while (in >> part) parts.push_back(std::move(part));
  return parts;
}

/// Multiset overlap >= 1 and multiset symmetric difference <= 1.
bool keys_match_partially(const std::string& a, const std::string& b) {
  std::map<std::string, int> counts;
  for (auto& w : split_key(a)) counts[w] += 1;
  int size_a = 0, size_b = 0, overlap = 0;
  for (auto& [w, c] : counts) size_a += c;
  std::map<std::string, int> remaining = counts;
  for (auto& w : split_key(b)) {
    ++size_b;
    auto it = remaining.find(w);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return overlap >= 1 && size_a + size_b - 2 * overlap <= 1;
}

std::vector<AnnotationSpan> textual_order(std::vector<AnnotationSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const AnnotationSpan& a, const AnnotationSpan& b) {
    return std::tie(a.review_id, a.sentence_index, a.start, a.end) <
           std::tie(b.review_id, b.sentence_index, b.start, b.end);
  });
  return spans;
}

std::unordered_map<std::string, std::string> category_index(const Corpus& corpus) {
  std::unordered_map<std::string, std::string> index;
  for (const auto& review : corpus.reviews) index[review.id] = review.category;
  return index;
}

const std::string& category_of(const std::unordered_map<std::string, std::string>& index,
                               const AnnotationSpan& span) {
  auto it = index.find(span.review_id);
  if (it == index.end())
    throw DataError("span references review '" + span.review_id + "' not in the corpus");
  return it->second;
}

/// Greedy one-to-one matching; returns tp. Items must be pre-sorted.
template <typename T, typename Match>
int greedy_match(const std::vector<T>& pred, const std::vector<T>& gold, Match match) {
  std::vector<char> taken(gold.size(), 0);
  int tp = 0;
  for (const T& p : pred) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (!taken[g] && match(p, gold[g])) {
        taken[g] = 1;
        ++tp;
        break;
      }
    }
  }
  return tp;
}

EvalScores score_token_lists(const std::vector<AnnotationSpan>& pred,
                             const std::vector<AnnotationSpan>& gold, MatchMode mode) {
  int tp = greedy_match(pred, gold, [mode](const AnnotationSpan& p, const AnnotationSpan& g) {
    return spans_match(p, g, mode);
  });
  return make_scores(tp, static_cast<int>(pred.size()) - tp,
                     static_cast<int>(gold.size()) - tp);
}

EvalScores score_key_sets(const std::set<std::string>& pred_keys,
                          const std::set<std::string>& gold_keys, MatchMode mode) {
  int tp = 0;
  if (mode == MatchMode::exact) {
    for (const auto& key : pred_keys) tp += gold_keys.count(key) ? 1 : 0;
  } else {
    std::vector<std::string> pred(pred_keys.begin(), pred_keys.end());
    std::vector<std::string> gold(gold_keys.begin(), gold_keys.end());
    tp = greedy_match(pred, gold, keys_match_partially);
  }
  return make_scores(tp, static_cast<int>(pred_keys.size()) - tp,
                     static_cast<int>(gold_keys.size()) - tp);
}

}  // namespace

std::string to_string(MatchMode mode) { return mode == MatchMode::exact ? "exact" : "partial"; }
std::string to_string(UnitMode mode) { return mode == UnitMode::token ? "token" : "type"; }

EvalScores make_scores(int tp, int fp, int fn) {
  EvalScores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

bool spans_match(const AnnotationSpan& pred, const AnnotationSpan& gold, MatchMode mode) {
  if (pred.review_id != gold.review_id || pred.sentence_index != gold.sentence_index)
    return false;
  if (mode == MatchMode::exact) return pred.start == gold.start && pred.end == gold.end;
  int overlap = std::min(pred.end, gold.end) - std::max(pred.start, gold.start);
  if (overlap < 1) return false;
  int sym_diff = (pred.end - pred.start - overlap) + (gold.end - gold.start - overlap);
  return sym_diff <= 1;
}

EvalReport evaluate_tokens(const Corpus& corpus, const std::vector<AnnotationSpan>& pred,
                           const std::vector<AnnotationSpan>& gold, MatchMode mode) {
  auto categories = category_index(corpus);
  auto pred_sorted = textual_order(pred);
  auto gold_sorted = textual_order(gold);

  EvalReport report;
  report.match = mode;
  report.unit = UnitMode::token;
  report.total = score_token_lists(pred_sorted, gold_sorted, mode);

  std::map<std::string, std::vector<AnnotationSpan>> pred_by_cat, gold_by_cat;
  for (const auto& span : pred_sorted) pred_by_cat[category_of(categories, span)].push_back(span);
  for (const auto& span : gold_sorted) gold_by_cat[category_of(categories, span)].push_back(span);
  std::set<std::string> all_categories;
  for (const auto& [cat, spans] : pred_by_cat) all_categories.insert(cat);
  for (const auto& [cat, spans] : gold_by_cat) all_categories.insert(cat);
  for (const auto& cat : all_categories)
    report.per_category[cat] = score_token_lists(pred_by_cat[cat], gold_by_cat[cat], mode);
  return report;
}

std::string type_key(const std::vector<std::string>& words, Language language) {
  std::string key;
  for (const auto& w : words) {
    if (!key.empty()) key.push_back(' ');
    key += stem(w, language);
  }
  return key;
}

std::string type_key(const Corpus& corpus, const AnnotationSpan& span, Language language) {
  return type_key(span_words(corpus, span), language);
}

EvalReport evaluate_types(const Corpus& corpus, const std::vector<AnnotationSpan>& pred,
                          const std::vector<AnnotationSpan>& gold, MatchMode mode,
                          Language language) {
  auto categories = category_index(corpus);

  std::set<std::string> pred_total, gold_total;
  std::map<std::string, std::set<std::string>> pred_by_cat, gold_by_cat;
  for (const auto& span : pred) {
    std::string key = type_key(corpus, span, language);
    pred_by_cat[category_of(categories, span)].insert(key);
    pred_total.insert(std::move(key));
  }
  for (const auto& span : gold) {
    std::string key = type_key(corpus, span, language);
    gold_by_cat[category_of(categories, span)].insert(key);
    gold_total.insert(std::move(key));
  }

  EvalReport report;
  report.match = mode;
  report.unit = UnitMode::type;
  report.total = score_key_sets(pred_total, gold_total, mode);
  std::set<std::string> all_categories;
  for (const auto& [cat, keys] : pred_by_cat) all_categories.insert(cat);
  for (const auto& [cat, keys] : gold_by_cat) all_categories.insert(cat);
  for (const auto& cat : all_categories)
    report.per_category[cat] = score_key_sets(pred_by_cat[cat], gold_by_cat[cat], mode);
  return report;
}

EvalScores macro_average(const std::vector<EvalScores>& per_category) {
  if (per_category.empty())
    throw ConfigError("macro_average needs at least one category report");
  EvalScores avg;
  for (const auto& s : per_category) {
    avg.tp += s.tp;
    avg.fp += s.fp;
    avg.fn += s.fn;
    avg.precision += s.precision;
    avg.recall += s.recall;
    avg.f1 += s.f1;
  }
  auto n = static_cast<double>(per_category.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.f1 /= n;
  return avg;
}

double dice_agreement(const std::vector<AnnotationSpan>& a, const std::vector<AnnotationSpan>& b) {
  using Key = std::tuple<std::string, int, int, int>;
  auto keys = [](const std::vector<AnnotationSpan>& spans) {
    std::set<Key> out;
    for (const auto& s : spans) out.insert({s.review_id, s.sentence_index, s.start, s.end});
    return out;
  };
  auto ka = keys(a);
  auto kb = keys(b);
  if (ka.empty() && kb.empty()) return 1.0;
  int common = 0;
  for (const auto& k : ka) common += kb.count(k) ? 1 : 0;
  return 2.0 * common / (static_cast<double>(ka.size()) + static_cast<double>(kb.size()));
}

}  // namespace revmine
