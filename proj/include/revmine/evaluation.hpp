#ifndef REVMINE_EVALUATION_HPP
#define REVMINE_EVALUATION_HPP

#include <map>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/stemmer.hpp"

namespace revmine {

enum class MatchMode { exact, partial };
enum class UnitMode { token, type };

std::string to_string(MatchMode mode);
std::string to_string(UnitMode mode);

struct EvalScores {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool operator==(const EvalScores&) const = default;
};

/// Fills precision/recall/f1 from the counts (0 when a denominator is 0).
EvalScores make_scores(int tp, int fp, int fn);

struct EvalReport {
  MatchMode match = MatchMode::exact;
  UnitMode unit = UnitMode::token;
  EvalScores total;  // pooled counts over all categories
  std::map<std::string, EvalScores> per_category;
};

/// Whether a predicted span hits a gold span. Spans in different reviews or
/// sentences never match. exact: same [start,end). partial: the position
/// sets overlap in at least one token and their symmetric difference has at
/// most one position.
bool spans_match(const AnnotationSpan& pred, const AnnotationSpan& gold, MatchMode mode);

/// Instance-level scoring. Matching is one-to-one and greedy in textual
/// order (review, sentence, start): each prediction takes the first still
/// unmatched gold span it matches. tp = matched pairs, fp = unmatched
/// predictions, fn = unmatched golds; also split per review category.
EvalReport evaluate_tokens(const Corpus& corpus, const std::vector<AnnotationSpan>& pred,
                           const std::vector<AnnotationSpan>& gold, MatchMode mode);

/// Space-joined stems of the words; case-insensitive by construction.
std::string type_key(const std::vector<std::string>& words,
                     Language language = Language::english);
std::string type_key(const Corpus& corpus, const AnnotationSpan& span,
                     Language language = Language::english);

/// Type-level scoring: spans collapse to distinct type keys first, so each
/// feature type counts once no matter how often it occurs. exact: key-set
/// intersection. partial: one-to-one greedy matching over lexicographically
/// sorted keys, where two keys match iff their stem multisets share at least
/// one stem and differ in at most one. The total block is computed over the
/// pooled key sets, so its counts need not equal the per-category sums.
EvalReport evaluate_types(const Corpus& corpus, const std::vector<AnnotationSpan>& pred,
                          const std::vector<AnnotationSpan>& gold, MatchMode mode,
                          Language language = Language::english);

/// Unweighted arithmetic mean of precision/recall/f1 across categories;
/// the count fields carry plain sums and are informational only here.
/// Throws ConfigError on empty input.
EvalScores macro_average(const std::vector<EvalScores>& per_category);

/// Dice coefficient 2|A∩B| / (|A|+|B|) between two annotators' span sets;
/// membership is exact (review, sentence, start, end) identity, the
/// annotator field is ignored. Both empty counts as full agreement (1.0).
double dice_agreement(const std::vector<AnnotationSpan>& a,
                      const std::vector<AnnotationSpan>& b);

}  // namespace revmine

#endif  // REVMINE_EVALUATION_HPP
