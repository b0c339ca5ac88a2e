#ifndef REVMINE_EXPERIMENTS_HPP
#define REVMINE_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/crf.hpp"
#include "revmine/evaluation.hpp"
#include "revmine/features.hpp"

namespace revmine {

/// How training and test data are split.
///   ccv      hold out each app category in turn, train on the others
///   app_cat  k-fold cross-validation inside each category independently
///   scv      k folds over the whole corpus, category-stratified
///   ccv_ext / scv_ext  same folds, external corpora added to training only
enum class Procedure { ccv, app_cat, scv, ccv_ext, scv_ext };

/// Accepts ccv, appcat, scv, ccv-ext, scv-ext; throws ConfigError otherwise.
Procedure parse_procedure(std::string_view name);
std::string to_string(Procedure procedure);
bool uses_external(Procedure procedure);

struct ExperimentConfig {
  Procedure procedure = Procedure::ccv;
  int k_folds = 10;  // >= 2; ignored by ccv (folds = categories)
  std::uint32_t seed = 42;
  std::string annotator;  // whose spans are gold for training and scoring
  FeatureTemplateConfig features;
  TrainConfig train;
  std::vector<Corpus> external_corpora;  // required iff procedure is *_ext
  const EmbeddingTable* embeddings = nullptr;
  int jobs = 1;  // folds run concurrently when > 1; results are order-independent
};

/// The four scoring runs every experiment performs, in fixed report order.
inline constexpr int kNumEvalModes = 4;
constexpr std::array<std::pair<MatchMode, UnitMode>, kNumEvalModes> kEvalModes = {{
    {MatchMode::exact, UnitMode::token},
    {MatchMode::partial, UnitMode::token},
    {MatchMode::exact, UnitMode::type},
    {MatchMode::partial, UnitMode::type},
}};
int eval_mode_index(MatchMode match, UnitMode unit);
std::string eval_mode_name(int index);  // e.g. "exact_token"

struct FoldResult {
  int fold = 0;
  std::string held_out;  // category, "category/j", or "fold j"
  int train_reviews = 0;
  int test_reviews = 0;
  long long train_feature_tokens = 0;  // B/I-labeled tokens seen in training
  std::array<EvalReport, kNumEvalModes> reports;
};

/// The review-id split of one fold, for auditing. run_experiment trains and
/// tests on exactly these sets; ids always come from the primary corpus
/// (external corpora only ever extend training sequences).
struct FoldPlan {
  int fold = 0;
  std::string held_out;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  bool operator==(const FoldPlan&) const = default;
};

/// The folds config.procedure would run on this corpus, in fold-id order.
std::vector<FoldPlan> plan_folds(const Corpus& corpus, const ExperimentConfig& config);

struct CategoryResult {
  std::string category;
  int folds_counted = 0;  // folds holding gold or predicted spans of the category
  std::array<EvalScores, kNumEvalModes> scores;  // mean ratios, summed counts
};

struct ExperimentResult {
  Procedure procedure = Procedure::ccv;
  int k_folds = 0;
  std::uint32_t seed = 0;
  std::string annotator;
  std::vector<FoldResult> folds;               // ordered by fold id
  std::vector<CategoryResult> per_category;    // sorted by category name
  std::array<EvalScores, kNumEvalModes> average;  // macro over categories
  double avg_train_feature_tokens = 0.0;
  long long corpus_feature_tokens = 0;  // gold feature tokens in the full corpus
  std::string size_label;               // S / M / L, see size_label_for
  std::string config_hash;
  std::string corpus_fingerprint;
  std::vector<std::string> external_fingerprints;
};

/// Training-set size relative to the whole corpus, by annotated feature
/// tokens: under half of it = S, up to all of it = M, beyond (external
/// data) = L.
std::string size_label_for(double avg_train_feature_tokens, long long corpus_feature_tokens);

/// A merged training input: the primary training reviews plus every external
/// corpus, with external review ids prefixed "ext<i>:" so ids stay unique.
/// One sequence per sentence; primary sentences are labeled from `annotator`,
/// external ones from each corpus's single annotator. Test data is never
/// touched. Throws DataError when an external corpus declares a different
/// metadata["language"] than the primary corpus (checked only when both
/// declare one) or does not have exactly one annotator.
struct TrainingSet {
  Corpus corpus;
  std::vector<LabeledSequence> sequences;
};
TrainingSet augment_training(const Corpus& train_corpus, const std::string& annotator,
                             const std::vector<Corpus>& external_corpora);

/// Hold out each category in turn. Requires >= 2 categories (DataError) and
/// config.procedure in {ccv, ccv_ext} (ConfigError).
ExperimentResult cross_category_validation(const Corpus& corpus,
                                           const ExperimentConfig& config);

/// Seeded k-fold cross-validation inside each category; training never
/// leaves the category. A category with fewer than k_folds reviews is a
/// ConfigError naming it. Requires config.procedure == app_cat.
ExperimentResult per_category_cv(const Corpus& corpus, const ExperimentConfig& config);

/// Seeded k folds over the whole corpus where every fold holds floor(n_c/k)
/// or ceil(n_c/k) reviews of every category c. Same size requirement as
/// per_category_cv. Requires config.procedure in {scv, scv_ext}.
ExperimentResult stratified_cv(const Corpus& corpus, const ExperimentConfig& config);

/// Validates the config and dispatches on config.procedure. Identical
/// (corpus, config, seed) give identical results.
ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config);

/// One sweep measurement: F1 statistics across the given corpora for one
/// length cutoff and one evaluation mode.
struct SweepRow {
  std::string cutoff;  // "1", "2", ... or "inf"
  MatchMode match = MatchMode::exact;
  UnitMode unit = UnitMode::token;
  double min_f1 = 0.0;
  double avg_f1 = 0.0;
  double max_f1 = 0.0;
};

/// For each cutoff: cap annotated feature length (nullopt = no cap at all),
/// run cross-category validation per corpus, and record min/avg/max of the
/// aggregate F1 across corpora for each of the four evaluation modes. Rows
/// come out grouped by cutoff in the given order, modes in report order.
std::vector<SweepRow> length_cutoff_sweep(const std::vector<Corpus>& corpora,
                                          const std::vector<std::optional<int>>& cutoffs,
                                          const ExperimentConfig& config);

/// 64-bit FNV-1a, lowercase hex. Stable across platforms and runs.
std::string fnv1a_hex(std::string_view data);

/// Content hash over reviews, tokens, and annotations (metadata excluded,
/// matching content_equal).
std::string corpus_fingerprint(const Corpus& corpus);

/// The hash recorded in ExperimentResult::config_hash, reproducible from the
/// same config.
std::string config_hash(const ExperimentConfig& config);

}  // namespace revmine

#endif  // REVMINE_EXPERIMENTS_HPP
