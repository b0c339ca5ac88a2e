#ifndef REVMINE_GUIDELINES_HPP
#define REVMINE_GUIDELINES_HPP

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

/// What one transformation step deleted and why. Statistics are pooled over
/// all annotators so the arithmetic below holds even when a step drops a
/// review that still carried another annotator's spans:
///   spans_removed   = stats_before.feature_tokens - stats_after.feature_tokens
///   reviews_removed = stats_before.n_reviews      - stats_after.n_reviews
struct RemovalReport {
  std::string step_name;
  int spans_removed = 0;
  int reviews_removed = 0;
  // (review_id, span text, reason)
  std::vector<std::tuple<std::string, std::string, std::string>> removed_examples;
  DatasetStats stats_before;
  DatasetStats stats_after;
};

struct StepOptions {
  // When set, a review counts as empty when THIS annotator has no spans left
  // in it; otherwise any remaining span keeps the review alive.
  std::optional<std::string> annotator;
  bool drop_empty_reviews = true;
};

/// Drops reviews that contain no annotated feature at all. Always drops,
/// regardless of StepOptions::drop_empty_reviews (dropping is the step).
std::pair<Corpus, RemovalReport> preprocess(const Corpus& corpus, const StepOptions& opt = {});

/// Removes spans whose whole lowercased text is a bare reference to the app
/// itself: an entry of the lexicon or the owning review's app name. An empty
/// lexicon selects the default {"app","apps","application","applications"}
/// plus the lowercased app names occurring in the corpus.
std::pair<Corpus, RemovalReport> remove_self_references(const Corpus& corpus,
                                                        std::set<std::string> lexicon = {},
                                                        const StepOptions& opt = {});

/// Removes spans containing no noun-tagged token. An empty tag set selects
/// {NN, NNS, NNP, NNPS}. Throws DataError when a span token has no POS tag
/// (run fallback_pos_tag first for untagged corpora).
std::pair<Corpus, RemovalReport> remove_nounless(const Corpus& corpus,
                                                 std::set<std::string> noun_tags = {},
                                                 const StepOptions& opt = {});

/// Removes spans longer than max_len tokens (removal, not truncation).
std::pair<Corpus, RemovalReport> cap_feature_length(const Corpus& corpus, int max_len = 3,
                                                    const StepOptions& opt = {});

enum class StepKind { preprocess, self_refs, nounless, length_cap };

std::string to_string(StepKind step);

struct PipelineConfig {
  std::vector<StepKind> steps;
  int max_len = 3;
  std::set<std::string> self_ref_lexicon;  // empty -> default
  std::set<std::string> noun_tags;         // empty -> default
  std::optional<std::string> annotator;
  bool drop_empty_reviews_after_each_step = true;
  // The four steps were designed to run as preprocess, self_refs, nounless,
  // length_cap; other orders can produce different corpora. Disabling this
  // check is possible but deliberate.
  bool enforce_order = true;
};

/// Applies the configured steps in sequence. Report k's stats_after equals
/// report k+1's stats_before. Throws ConfigError on duplicate or
/// out-of-order steps while enforce_order is set.
std::pair<Corpus, std::vector<RemovalReport>> run_pipeline(const Corpus& corpus,
                                                           const PipelineConfig& config);

}  // namespace revmine

#endif  // REVMINE_GUIDELINES_HPP
