#ifndef REVMINE_CRF_HPP
#define REVMINE_CRF_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/features.hpp"

namespace revmine {

inline constexpr int kNumLabels = 3;  // B, I, O, in BioTag order

/// One token's features resolved against a model's feature index:
/// (column, value) pairs, binary features carrying value 1.0.
struct FeaturizedToken {
  std::vector<std::pair<int, double>> features;
};
using FeaturizedSentence = std::vector<FeaturizedToken>;

struct TrainConfig {
  double l2_lambda = 1.0;     // weight of the squared-norm penalty
  int max_iterations = 200;   // 0 returns the zero-weight model with a warning
  double convergence_tol = 1e-5;  // relative objective change
  int seed = 42;              // recorded for provenance; training is deterministic
};

struct TrainMeta {
  int iterations = 0;
  double objective = 0.0;
  bool operator==(const TrainMeta&) const = default;
};

/// Linear-chain model over the B/I/O label set.
///
/// Scores: a path y_0..y_{T-1} scores
///   transition(start, y_0) + sum_t state(t, y_t) + sum_{t>=1} transition(y_{t-1}, y_t)
/// where state(t, y) is the dot product of the token's feature values with
/// column y of state_weights. Feature ids unknown to the model contribute 0.
struct CrfModel {
  FeatureTemplateConfig config;
  std::vector<std::string> feature_names;        // column -> id, kept sorted
  std::map<std::string, int> feature_index;      // id -> column
  std::vector<double> state_weights;             // [n_features * kNumLabels], feature-major
  std::array<double, (kNumLabels + 1) * kNumLabels> transition_weights{};  // row kNumLabels = start
  TrainMeta train_meta;

  int n_features() const { return static_cast<int>(feature_names.size()); }
  double state_weight(int feature, int label) const {
    return state_weights[static_cast<std::size_t>(feature) * kNumLabels + label];
  }
  double transition(int prev, int next) const {
    return transition_weights[static_cast<std::size_t>(prev) * kNumLabels + next];
  }

  /// Resolves extract_features output against feature_index; unknown ids are
  /// dropped (they would score 0 everywhere).
  FeaturizedSentence featurize(const Sentence& sentence,
                               const EmbeddingTable* embeddings = nullptr) const;
};

/// Exact posterior quantities for one sentence.
struct Marginals {
  double log_z = 0.0;
  /// state[t][y] = p(label at t is y); each row sums to 1.
  std::vector<std::array<double, kNumLabels>> state;
  /// transition[t][a][b] = p(label a at t, label b at t+1), for t in [0, T-1).
  std::vector<std::array<std::array<double, kNumLabels>, kNumLabels>> transition;
};

/// Forward-backward in log domain. Sentence must be non-empty.
Marginals forward_backward(const CrfModel& model, const FeaturizedSentence& sentence);

/// A featurized sentence paired with its gold labels, the unit consumed by
/// the objective.
struct TrainInstance {
  FeaturizedSentence tokens;
  std::vector<BioTag> labels;  // same length as tokens
};

/// Regularized negative conditional log-likelihood and its gradient over a
/// batch, evaluated at a flat weight vector laid out as
///   [feature 0: B,I,O | feature 1: B,I,O | ... | transitions row-major,
///    rows B,I,O,start], so its size is n_features*3 + 12.
/// objective = sum over sentences of (logZ - gold path score)
///             + l2_lambda * |w|^2,
/// gradient  = expected feature counts - gold feature counts + 2*l2_lambda*w.
/// Sentences are accumulated in order, so results do not depend on thread
/// count (there are no threads) and repeat runs are bit-identical.
double nll_and_gradient(const std::vector<double>& weights, int n_features,
                        const std::vector<TrainInstance>& batch, double l2_lambda,
                        std::vector<double>& gradient);

/// Fits a model on gold sequences drawn from `corpus` (each LabeledSequence
/// names a sentence by review id and index). Features are collected from the
/// training data, weights start at zero, and the objective is minimized with
/// the limited-memory quasi-Newton routine from optim.hpp until
/// convergence_tol or max_iterations. Throws DataError when `sequences` is
/// empty, references a missing sentence, or has a label-count mismatch;
/// ConfigError when config.use_embeddings is set without a table.
CrfModel train(const Corpus& corpus, const std::vector<LabeledSequence>& sequences,
               const FeatureTemplateConfig& config,
               const EmbeddingTable* embeddings = nullptr,
               const TrainConfig& train_config = {});

/// Highest-scoring label path. Hard constraints applied at decode time:
/// start->I and O->I get score -infinity, so output is always valid BIO.
/// Ties resolve to the earlier label in B < I < O order.
std::vector<BioTag> viterbi(const CrfModel& model, const FeaturizedSentence& sentence);

/// Decodes every sentence and returns the resulting spans with
/// annotator = "model", in canonical order. Requires an embedding table when
/// the model was trained with embedding features.
std::vector<AnnotationSpan> predict_spans(const CrfModel& model, const Corpus& corpus,
                                          const EmbeddingTable* embeddings = nullptr);

/// Versioned JSON with the feature dictionary in sorted order; loading the
/// file and saving it again is byte-identical. save throws IoError on write
/// failure; load throws IoError, ParseError on malformed JSON, or DataError
/// on a version or structure mismatch.
void save_model(const CrfModel& model, const std::string& path);
CrfModel load_model(const std::string& path);

}  // namespace revmine

#endif  // REVMINE_CRF_HPP
