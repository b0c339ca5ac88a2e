#include "revmine/crf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "revmine/errors.hpp"
#include "revmine/log.hpp"
#include "revmine/optim.hpp"

namespace revmine {
namespace {

using ordered_json = nlohmann::ordered_json;
using Row = std::array<double, kNumLabels>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kStart = kNumLabels;  // extra transition row for the path start
constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "revmine-crf";

/// log(sum(exp(r))) without overflow; -inf rows stay -inf.
double logsumexp(const Row& r) {
  const double m = std::max({r[0], r[1], r[2]});
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : r) sum += std::exp(x - m);
  return m + std::log(sum);
}

/// Raw weight access on the flat layout [state: f*3+y | transitions: p*3+y].
struct WeightsView {
  const double* state;
  const double* trans;

  WeightsView(const std::vector<double>& w, int n_features)
      : state(w.data()), trans(w.data() + static_cast<std::size_t>(n_features) * kNumLabels) {}
  WeightsView(const CrfModel& m)
      : state(m.state_weights.data()), trans(m.transition_weights.data()) {}

  double transition(int prev, int next) const { return trans[prev * kNumLabels + next]; }
};

std::vector<Row> state_scores(const WeightsView& w, const FeaturizedSentence& sentence) {
  std::vector<Row> scores(sentence.size(), Row{0.0, 0.0, 0.0});
  for (std::size_t t = 0; t < sentence.size(); ++t) {
    for (const auto& [feature, value] : sentence[t].features) {
      const double* row = w.state + static_cast<std::size_t>(feature) * kNumLabels;
      for (int y = 0; y < kNumLabels; ++y) scores[t][y] += row[y] * value;
    }
  }
  return scores;
}

Marginals run_forward_backward(const WeightsView& w, const std::vector<Row>& scores) {
  const std::size_t n = scores.size();
  std::vector<Row> alpha(n), beta(n);

  for (int y = 0; y < kNumLabels; ++y) {
    alpha[0][y] = w.transition(kStart, y) + scores[0][y];
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      Row incoming;
      for (int p = 0; p < kNumLabels; ++p) {
        incoming[p] = alpha[t - 1][p] + w.transition(p, y);
      }
      alpha[t][y] = logsumexp(incoming) + scores[t][y];
    }
  }

  beta[n - 1] = {0.0, 0.0, 0.0};
  for (std::size_t t = n - 1; t-- > 0;) {
    for (int y = 0; y < kNumLabels; ++y) {
      Row outgoing;
      for (int q = 0; q < kNumLabels; ++q) {
        outgoing[q] = w.transition(y, q) + scores[t + 1][q] + beta[t + 1][q];
      }
      beta[t][y] = logsumexp(outgoing);
    }
  }

  Marginals m;
  m.log_z = logsumexp(alpha[n - 1]);
  m.state.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      m.state[t][y] = std::exp(alpha[t][y] + beta[t][y] - m.log_z);
    }
  }
  m.transition.resize(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (int a = 0; a < kNumLabels; ++a) {
      for (int b = 0; b < kNumLabels; ++b) {
        m.transition[t][a][b] = std::exp(alpha[t][a] + w.transition(a, b) +
                                         scores[t + 1][b] + beta[t + 1][b] - m.log_z);
      }
    }
  }
  return m;
}

double gold_path_score(const WeightsView& w, const std::vector<Row>& scores,
                       const std::vector<BioTag>& labels) {
  double total = w.transition(kStart, static_cast<int>(labels[0]));
  for (std::size_t t = 0; t < labels.size(); ++t) {
    total += scores[t][static_cast<int>(labels[t])];
    if (t > 0) {
      total += w.transition(static_cast<int>(labels[t - 1]), static_cast<int>(labels[t]));
    }
  }
  return total;
}

ordered_json config_to_json(const FeatureTemplateConfig& c) {
  ordered_json j;
  j["window"] = c.window;
  j["affix_lengths"] = c.affix_lengths;  // std::set serializes in sorted order
  j["use_pos"] = c.use_pos;
  j["use_position"] = c.use_position;
  j["use_stylistics"] = c.use_stylistics;
  j["use_embeddings"] = c.use_embeddings;
  j["embedding_dim"] = c.embedding_dim;
  return j;
}

FeatureTemplateConfig config_from_json(const ordered_json& j) {
  FeatureTemplateConfig c;
  c.window = j.at("window").get<int>();
  c.affix_lengths.clear();
  for (const auto& v : j.at("affix_lengths")) c.affix_lengths.insert(v.get<int>());
  c.use_pos = j.at("use_pos").get<bool>();
  c.use_position = j.at("use_position").get<bool>();
  c.use_stylistics = j.at("use_stylistics").get<bool>();
  c.use_embeddings = j.at("use_embeddings").get<bool>();
  c.embedding_dim = j.at("embedding_dim").get<int>();
  return c;
}

}  // namespace

FeaturizedSentence CrfModel::featurize(const Sentence& sentence,
                                       const EmbeddingTable* embeddings) const {
  FeaturizedSentence out(sentence.tokens.size());
  for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
    const FeatureVector fv =
        extract_features(sentence, static_cast<int>(t), config, embeddings);
    for (const std::string& id : fv.binary) {
      auto it = feature_index.find(id);
      if (it != feature_index.end()) out[t].features.emplace_back(it->second, 1.0);
    }
    for (const auto& [id, value] : fv.continuous) {
      auto it = feature_index.find(id);
      if (it != feature_index.end()) out[t].features.emplace_back(it->second, value);
    }
  }
  return out;
}

Marginals forward_backward(const CrfModel& model, const FeaturizedSentence& sentence) {
  if (sentence.empty()) throw ConfigError("forward_backward needs a non-empty sentence");
  const WeightsView w(model);
  return run_forward_backward(w, state_scores(w, sentence));
}

double nll_and_gradient(const std::vector<double>& weights, int n_features,
                        const std::vector<TrainInstance>& batch, double l2_lambda,
                        std::vector<double>& gradient) {
  const std::size_t trans_offset = static_cast<std::size_t>(n_features) * kNumLabels;
  gradient.assign(weights.size(), 0.0);
  const WeightsView w(weights, n_features);

  double objective = 0.0;
  for (const TrainInstance& inst : batch) {
    const std::vector<Row> scores = state_scores(w, inst.tokens);
    const Marginals m = run_forward_backward(w, scores);
    objective += m.log_z - gold_path_score(w, scores, inst.labels);

    for (std::size_t t = 0; t < inst.tokens.size(); ++t) {
      const int gold = static_cast<int>(inst.labels[t]);
      for (const auto& [feature, value] : inst.tokens[t].features) {
        double* row = gradient.data() + static_cast<std::size_t>(feature) * kNumLabels;
        for (int y = 0; y < kNumLabels; ++y) row[y] += m.state[t][y] * value;
        row[gold] -= value;
      }
    }
    double* trans_grad = gradient.data() + trans_offset;
    for (int y = 0; y < kNumLabels; ++y) {
      trans_grad[kStart * kNumLabels + y] += m.state[0][y];
    }
    trans_grad[kStart * kNumLabels + static_cast<int>(inst.labels[0])] -= 1.0;
    for (std::size_t t = 0; t + 1 < inst.tokens.size(); ++t) {
      for (int a = 0; a < kNumLabels; ++a) {
        for (int b = 0; b < kNumLabels; ++b) {
          trans_grad[a * kNumLabels + b] += m.transition[t][a][b];
        }
      }
      trans_grad[static_cast<int>(inst.labels[t]) * kNumLabels +
                 static_cast<int>(inst.labels[t + 1])] -= 1.0;
    }
  }

  if (l2_lambda != 0.0) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      objective += l2_lambda * weights[i] * weights[i];
      gradient[i] += 2.0 * l2_lambda * weights[i];
    }
  }
  return objective;
}

CrfModel train(const Corpus& corpus, const std::vector<LabeledSequence>& sequences,
               const FeatureTemplateConfig& config, const EmbeddingTable* embeddings,
               const TrainConfig& train_config) {
  if (sequences.empty()) throw DataError("no training data");
  if (train_config.l2_lambda < 0.0) throw ConfigError("l2_lambda must be >= 0");
  if (train_config.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (config.use_embeddings) {
    if (embeddings == nullptr) {
      throw ConfigError("use_embeddings is set but no embedding table was given");
    }
    if (config.embedding_dim != 0 && config.embedding_dim != embeddings->dim) {
      throw ConfigError("embedding_dim " + std::to_string(config.embedding_dim) +
                        " does not match the table (" + std::to_string(embeddings->dim) +
                        ")");
    }
  }

  CrfModel model;
  model.config = config;
  if (config.use_embeddings) model.config.embedding_dim = embeddings->dim;

  // Pass 1: extract raw features for every token, collecting the vocabulary.
  struct RawSentence {
    std::vector<FeatureVector> tokens;
    std::vector<BioTag> labels;
  };
  std::vector<RawSentence> raw;
  for (const LabeledSequence& seq : sequences) {
    const Review* review = corpus.find_review(seq.review_id);
    if (review == nullptr) {
      throw DataError("training sequence references unknown review '" + seq.review_id + "'");
    }
    if (seq.sentence_index < 0 ||
        seq.sentence_index >= static_cast<int>(review->sentences.size())) {
      throw DataError("training sequence references missing sentence " +
                      std::to_string(seq.sentence_index) + " of review '" +
                      seq.review_id + "'");
    }
    const Sentence& sentence = review->sentences[seq.sentence_index];
    if (seq.labels.size() != sentence.tokens.size()) {
      throw DataError("label count does not match token count in review '" +
                      seq.review_id + "'");
    }
    if (sentence.tokens.empty()) continue;
    RawSentence rs;
    rs.labels = seq.labels;
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      rs.tokens.push_back(
          extract_features(sentence, static_cast<int>(t), model.config, embeddings));
      const FeatureVector& fv = rs.tokens.back();
      for (const std::string& id : fv.binary) model.feature_index.emplace(id, 0);
      for (const auto& [id, value] : fv.continuous) model.feature_index.emplace(id, 0);
    }
    raw.push_back(std::move(rs));
  }
  if (raw.empty()) throw DataError("no training data");

  // Columns in sorted id order, which keeps the model file canonical.
  for (auto& [id, column] : model.feature_index) {
    column = static_cast<int>(model.feature_names.size());
    model.feature_names.push_back(id);
  }

  // Pass 2: resolve ids against the final index.
  std::vector<TrainInstance> batch;
  batch.reserve(raw.size());
  for (RawSentence& rs : raw) {
    TrainInstance inst;
    inst.labels = std::move(rs.labels);
    inst.tokens.resize(rs.tokens.size());
    for (std::size_t t = 0; t < rs.tokens.size(); ++t) {
      for (const std::string& id : rs.tokens[t].binary) {
        inst.tokens[t].features.emplace_back(model.feature_index.at(id), 1.0);
      }
      for (const auto& [id, value] : rs.tokens[t].continuous) {
        inst.tokens[t].features.emplace_back(model.feature_index.at(id), value);
      }
    }
    batch.push_back(std::move(inst));
  }
  raw.clear();

  const int n_features = model.n_features();
  std::vector<double> x0(static_cast<std::size_t>(n_features) * kNumLabels +
                             model.transition_weights.size(),
                         0.0);
  if (train_config.max_iterations == 0) {
    log_warn("max_iterations is 0; returning an untrained zero-weight model");
  }

  LbfgsOptions options;
  options.max_iterations = train_config.max_iterations;
  options.tol = train_config.convergence_tol;
  const LbfgsResult result = lbfgs_minimize(
      std::move(x0),
      [&](const std::vector<double>& w, std::vector<double>& g) {
        return nll_and_gradient(w, n_features, batch, train_config.l2_lambda, g);
      },
      options);

  model.state_weights.assign(result.x.begin(),
                             result.x.begin() + static_cast<std::ptrdiff_t>(
                                                    static_cast<std::size_t>(n_features) *
                                                    kNumLabels));
  std::copy(result.x.end() - static_cast<std::ptrdiff_t>(model.transition_weights.size()),
            result.x.end(), model.transition_weights.begin());
  model.train_meta = {result.iterations, result.objective};
  return model;
}

std::vector<BioTag> viterbi(const CrfModel& model, const FeaturizedSentence& sentence) {
  if (sentence.empty()) return {};
  const WeightsView w(model);
  const std::vector<Row> scores = state_scores(w, sentence);
  const std::size_t n = scores.size();
  const int label_i = static_cast<int>(BioTag::I);
  const int label_o = static_cast<int>(BioTag::O);

  std::vector<Row> delta(n);
  std::vector<std::array<int, kNumLabels>> back(n);
  for (int y = 0; y < kNumLabels; ++y) {
    // start -> I is forbidden; a span cannot begin mid-entity.
    delta[0][y] = y == label_i ? kNegInf : w.transition(kStart, y) + scores[0][y];
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (int y = 0; y < kNumLabels; ++y) {
      double best = kNegInf;
      int best_prev = 0;
      for (int p = 0; p < kNumLabels; ++p) {
        if (p == label_o && y == label_i) continue;  // O -> I forbidden
        const double candidate = delta[t - 1][p] + w.transition(p, y);
        if (candidate > best) {  // strict: ties keep the earlier label
          best = candidate;
          best_prev = p;
        }
      }
      delta[t][y] = best + scores[t][y];
      back[t][y] = best_prev;
    }
  }

  int label = 0;
  double best = kNegInf;
  for (int y = 0; y < kNumLabels; ++y) {
    if (delta[n - 1][y] > best) {
      best = delta[n - 1][y];
      label = y;
    }
  }
  std::vector<BioTag> labels(n);
  for (std::size_t t = n; t-- > 0;) {
    labels[t] = static_cast<BioTag>(label);
    if (t > 0) label = back[t][label];
  }
  return labels;
}

std::vector<AnnotationSpan> predict_spans(const CrfModel& model, const Corpus& corpus,
                                          const EmbeddingTable* embeddings) {
  if (model.config.use_embeddings && embeddings == nullptr) {
    throw ConfigError("model uses embedding features; pass the table it was trained with");
  }
  std::vector<AnnotationSpan> spans;
  for (const Review& review : corpus.reviews) {
    for (const Sentence& sentence : review.sentences) {
      if (sentence.tokens.empty()) continue;
      const std::vector<BioTag> labels =
          viterbi(model, model.featurize(sentence, embeddings));
      for (const auto& [start, end] : bio_decode(labels)) {
        spans.push_back({"model", review.id, sentence.sentence_index, start, end});
      }
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const AnnotationSpan& a, const AnnotationSpan& b) {
              return a.sort_key() < b.sort_key();
            });
  return spans;
}

void save_model(const CrfModel& model, const std::string& path) {
  ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["labels"] = {"B", "I", "O"};
  j["config"] = config_to_json(model.config);
  j["features"] = model.feature_names;
  ordered_json state = ordered_json::array();
  for (int f = 0; f < model.n_features(); ++f) {
    state.push_back({model.state_weight(f, 0), model.state_weight(f, 1),
                     model.state_weight(f, 2)});
  }
  j["state_weights"] = std::move(state);
  ordered_json trans = ordered_json::array();
  for (int p = 0; p <= kNumLabels; ++p) {
    trans.push_back({model.transition(p, 0), model.transition(p, 1), model.transition(p, 2)});
  }
  j["transition_weights"] = std::move(trans);
  j["train_meta"] = {{"iterations", model.train_meta.iterations},
                     {"objective", model.train_meta.objective}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  out.flush();
  if (!out) throw IoError("failed writing model to '" + path + "'");
}

CrfModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(
                std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError("model file is not valid JSON: " + std::string(e.what()), line);
  }

  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw DataError("not a model file (format tag mismatch)");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw DataError("unsupported model file version " + j.at("version").dump() +
                      " (expected " + std::to_string(kModelVersion) + ")");
    }
    const std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    if (labels != std::vector<std::string>{"B", "I", "O"}) {
      throw DataError("unexpected label set in model file");
    }

    CrfModel model;
    model.config = config_from_json(j.at("config"));
    model.feature_names = j.at("features").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < model.feature_names.size(); ++i) {
      if (!model.feature_index.emplace(model.feature_names[i], static_cast<int>(i)).second) {
        throw DataError("duplicate feature id in model file");
      }
    }

    const ordered_json& state = j.at("state_weights");
    if (state.size() != model.feature_names.size()) {
      throw DataError("state_weights row count does not match the feature list");
    }
    model.state_weights.reserve(state.size() * kNumLabels);
    for (const auto& row : state) {
      if (row.size() != kNumLabels) throw DataError("state_weights row is not 3 wide");
      for (const auto& v : row) model.state_weights.push_back(v.get<double>());
    }
    const ordered_json& trans = j.at("transition_weights");
    if (trans.size() != kNumLabels + 1) {
      throw DataError("transition_weights must have 4 rows");
    }
    std::size_t i = 0;
    for (const auto& row : trans) {
      if (row.size() != kNumLabels) throw DataError("transition_weights row is not 3 wide");
      for (const auto& v : row) model.transition_weights[i++] = v.get<double>();
    }
    model.train_meta.iterations = j.at("train_meta").at("iterations").get<int>();
    model.train_meta.objective = j.at("train_meta").at("objective").get<double>();

    for (double v : model.state_weights) {
      if (!std::isfinite(v)) throw DataError("non-finite state weight in model file");
    }
    for (double v : model.transition_weights) {
      if (!std::isfinite(v)) throw DataError("non-finite transition weight in model file");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace revmine
