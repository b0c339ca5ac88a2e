#include "revmine/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <set>
#include <thread>

#include "revmine/errors.hpp"
#include "revmine/guidelines.hpp"
#include "revmine/rng.hpp"

namespace revmine {
namespace {

/// Review indices per fold; indices point into corpus.reviews.
struct Fold {
  int id = 0;
  std::string held_out;
  std::vector<int> test;
  std::vector<int> train;
};

Corpus subset(const Corpus& corpus, std::vector<int> review_indices) {
  std::sort(review_indices.begin(), review_indices.end());  // keep corpus order
  Corpus out;
  out.metadata = corpus.metadata;
  std::set<std::string> kept;
  for (int idx : review_indices) {
    out.reviews.push_back(corpus.reviews[static_cast<std::size_t>(idx)]);
    kept.insert(out.reviews.back().id);
  }
  for (const AnnotationSpan& span : corpus.annotations) {
    if (kept.count(span.review_id)) out.annotations.push_back(span);
  }
  return out;  // annotations stay canonically sorted: filtering preserves order
}

/// bio_encode, except a corpus where the annotator has no spans yields all-O
/// sequences instead of an error: a training fold may legitimately hold only
/// span-free reviews.
std::vector<LabeledSequence> sequences_for(const Corpus& corpus, const std::string& annotator) {
  if (corpus.annotator_ids().count(annotator)) return bio_encode(corpus, annotator);
  std::vector<LabeledSequence> out;
  for (const Review& review : corpus.reviews) {
    for (const Sentence& sentence : review.sentences) {
      out.push_back({review.id, sentence.sentence_index,
                     std::vector<BioTag>(sentence.tokens.size(), BioTag::O)});
    }
  }
  return out;
}

long long count_feature_tokens(const std::vector<LabeledSequence>& sequences) {
  long long n = 0;
  for (const LabeledSequence& seq : sequences) {
    for (BioTag tag : seq.labels) {
      if (tag != BioTag::O) ++n;
    }
  }
  return n;
}

std::map<std::string, std::vector<int>> reviews_by_category(const Corpus& corpus) {
  std::map<std::string, std::vector<int>> by_category;
  for (std::size_t i = 0; i < corpus.reviews.size(); ++i) {
    by_category[corpus.reviews[i].category].push_back(static_cast<int>(i));
  }
  return by_category;
}

void check_category_size(const std::string& category, std::size_t n, int k) {
  if (static_cast<int>(n) < k) {
    throw ConfigError("category '" + category + "' has " + std::to_string(n) +
                      " reviews, fewer than k_folds=" + std::to_string(k));
  }
}

void validate_config(const Corpus& corpus, const ExperimentConfig& config) {
  if (config.k_folds < 2) throw ConfigError("k_folds must be >= 2");
  if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (uses_external(config.procedure) && config.external_corpora.empty()) {
    throw ConfigError(to_string(config.procedure) + " requires external corpora");
  }
  if (!uses_external(config.procedure) && !config.external_corpora.empty()) {
    throw ConfigError("external corpora are only consumed by the -ext procedures");
  }
  if (config.features.use_embeddings && config.embeddings == nullptr) {
    throw ConfigError("use_embeddings is set but no embedding table was given");
  }
  if (config.annotator.empty()) throw ConfigError("annotator must be set");
  if (!corpus.annotator_ids().count(config.annotator)) {
    throw DataError("annotator '" + config.annotator + "' has no spans in the corpus");
  }
}

void require_procedure(const ExperimentConfig& config, Procedure a, Procedure b,
                       const char* op) {
  if (config.procedure != a && config.procedure != b) {
    throw ConfigError(std::string(op) + " cannot run procedure " +
                      to_string(config.procedure));
  }
}

FoldResult run_fold(const Corpus& corpus, const ExperimentConfig& config, const Fold& fold) {
  Corpus train_corpus = subset(corpus, fold.train);
  const Corpus test_corpus = subset(corpus, fold.test);

  TrainingSet ts;
  if (uses_external(config.procedure)) {
    ts = augment_training(train_corpus, config.annotator, config.external_corpora);
  } else {
    ts.sequences = sequences_for(train_corpus, config.annotator);
    ts.corpus = std::move(train_corpus);
  }

  const CrfModel model =
      train(ts.corpus, ts.sequences, config.features, config.embeddings, config.train);

  const std::vector<AnnotationSpan> predicted =
      predict_spans(model, test_corpus, config.embeddings);
  std::vector<AnnotationSpan> gold;
  for (const AnnotationSpan& span : test_corpus.annotations) {
    if (span.annotator == config.annotator) gold.push_back(span);
  }

  FoldResult result;
  result.fold = fold.id;
  result.held_out = fold.held_out;
  result.train_reviews = static_cast<int>(fold.train.size());
  result.test_reviews = static_cast<int>(fold.test.size());
  result.train_feature_tokens = count_feature_tokens(ts.sequences);
  for (int m = 0; m < kNumEvalModes; ++m) {
    const auto [match, unit] = kEvalModes[static_cast<std::size_t>(m)];
    result.reports[static_cast<std::size_t>(m)] =
        unit == UnitMode::token ? evaluate_tokens(test_corpus, predicted, gold, match)
                                : evaluate_types(test_corpus, predicted, gold, match);
  }
  return result;
}

std::vector<FoldResult> run_folds(const Corpus& corpus, const ExperimentConfig& config,
                                  const std::vector<Fold>& folds) {
  std::vector<FoldResult> results(folds.size());
  const int jobs = std::min<int>(config.jobs, static_cast<int>(folds.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < folds.size(); ++i) {
      results[i] = run_fold(corpus, config, folds[i]);
    }
    return results;
  }

  // Folds are independent; workers claim indices and fill disjoint slots, so
  // assembly is order-independent and the first failure (by fold id) wins.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(folds.size());
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= folds.size()) return;
      try {
        results[i] = run_fold(corpus, config, folds[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return results;
}

ExperimentResult aggregate(const Corpus& corpus, const ExperimentConfig& config,
                           const std::vector<Fold>& folds) {
  ExperimentResult out;
  out.procedure = config.procedure;
  out.k_folds = config.k_folds;
  out.seed = config.seed;
  out.annotator = config.annotator;
  out.folds = run_folds(corpus, config, folds);

  // Category means over the folds that hold gold or predicted spans of the
  // category; a fold with neither carries no evidence about it.
  std::set<std::string> categories;
  for (const FoldResult& fr : out.folds) {
    for (const auto& [category, scores] : fr.reports[0].per_category) {
      categories.insert(category);
    }
  }
  for (const std::string& category : categories) {
    CategoryResult cr;
    cr.category = category;
    for (int m = 0; m < kNumEvalModes; ++m) {
      std::vector<EvalScores> per_fold;
      for (const FoldResult& fr : out.folds) {
        auto it = fr.reports[static_cast<std::size_t>(m)].per_category.find(category);
        if (it != fr.reports[static_cast<std::size_t>(m)].per_category.end()) {
          per_fold.push_back(it->second);
        }
      }
      if (m == 0) cr.folds_counted = static_cast<int>(per_fold.size());
      cr.scores[static_cast<std::size_t>(m)] =
          per_fold.empty() ? EvalScores{} : macro_average(per_fold);
    }
    out.per_category.push_back(std::move(cr));
  }

  for (int m = 0; m < kNumEvalModes; ++m) {
    std::vector<EvalScores> across;
    for (const CategoryResult& cr : out.per_category) {
      across.push_back(cr.scores[static_cast<std::size_t>(m)]);
    }
    out.average[static_cast<std::size_t>(m)] =
        across.empty() ? EvalScores{} : macro_average(across);
  }

  double total_train_tokens = 0.0;
  for (const FoldResult& fr : out.folds) {
    total_train_tokens += static_cast<double>(fr.train_feature_tokens);
  }
  out.avg_train_feature_tokens =
      out.folds.empty() ? 0.0 : total_train_tokens / static_cast<double>(out.folds.size());
  for (const AnnotationSpan& span : corpus.annotations) {
    if (span.annotator == config.annotator) {
      out.corpus_feature_tokens += span.end - span.start;
    }
  }
  out.size_label = size_label_for(out.avg_train_feature_tokens, out.corpus_feature_tokens);

  out.config_hash = config_hash(config);
  out.corpus_fingerprint = corpus_fingerprint(corpus);
  for (const Corpus& external : config.external_corpora) {
    out.external_fingerprints.push_back(corpus_fingerprint(external));
  }
  return out;
}

/// Shuffles and cuts one category into k blocks whose sizes differ by at
/// most one (the first n%k blocks are one longer).
std::vector<std::vector<int>> split_category(std::vector<int> indices, int k,
                                             std::mt19937& rng) {
  deterministic_shuffle(indices, rng);
  const std::size_t n = indices.size();
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
  std::size_t at = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    parts[j].assign(indices.begin() + static_cast<std::ptrdiff_t>(at),
                    indices.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
  }
  return parts;
}

std::vector<Fold> folds_ccv(const Corpus& corpus) {
  const auto by_category = reviews_by_category(corpus);
  if (by_category.size() < 2) {
    throw DataError("cross-category validation needs at least 2 categories, found " +
                    std::to_string(by_category.size()));
  }
  std::vector<Fold> folds;
  for (const auto& [category, indices] : by_category) {
    Fold fold;
    fold.id = static_cast<int>(folds.size());
    fold.held_out = category;
    fold.test = indices;
    for (const auto& [other, other_indices] : by_category) {
      if (other != category) {
        fold.train.insert(fold.train.end(), other_indices.begin(), other_indices.end());
      }
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<Fold> folds_appcat(const Corpus& corpus, int k, std::uint32_t seed) {
  const auto by_category = reviews_by_category(corpus);
  std::mt19937 rng = make_rng(seed);
  std::vector<Fold> folds;
  for (const auto& [category, indices] : by_category) {
    check_category_size(category, indices.size(), k);
    const auto parts = split_category(indices, k, rng);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      Fold fold;
      fold.id = static_cast<int>(folds.size());
      fold.held_out = category + "/" + std::to_string(j);
      fold.test = parts[j];
      for (std::size_t o = 0; o < parts.size(); ++o) {
        if (o != j) fold.train.insert(fold.train.end(), parts[o].begin(), parts[o].end());
      }
      folds.push_back(std::move(fold));
    }
  }
  return folds;
}

std::vector<Fold> folds_scv(const Corpus& corpus, int k_folds, std::uint32_t seed) {
  const auto by_category = reviews_by_category(corpus);
  std::mt19937 rng = make_rng(seed);
  const std::size_t k = static_cast<std::size_t>(k_folds);

  // Deal each category round-robin; the category ordinal offsets the first
  // fold so the remainders do not all land on fold 0.
  std::vector<std::vector<int>> members(k);
  std::size_t ordinal = 0;
  for (const auto& [category, indices] : by_category) {
    check_category_size(category, indices.size(), k_folds);
    std::vector<int> shuffled = indices;
    deterministic_shuffle(shuffled, rng);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      members[(i + ordinal) % k].push_back(shuffled[i]);
    }
    ++ordinal;
  }

  std::vector<Fold> folds;
  for (std::size_t j = 0; j < k; ++j) {
    Fold fold;
    fold.id = static_cast<int>(j);
    fold.held_out = "fold " + std::to_string(j);
    fold.test = members[j];
    for (std::size_t o = 0; o < k; ++o) {
      if (o != j) fold.train.insert(fold.train.end(), members[o].begin(), members[o].end());
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<Fold> build_folds(const Corpus& corpus, const ExperimentConfig& config) {
  switch (config.procedure) {
    case Procedure::ccv:
    case Procedure::ccv_ext:
      return folds_ccv(corpus);
    case Procedure::app_cat:
      return folds_appcat(corpus, config.k_folds, config.seed);
    case Procedure::scv:
    case Procedure::scv_ext:
      return folds_scv(corpus, config.k_folds, config.seed);
  }
  throw ConfigError("unknown procedure");
}

/// Incremental FNV-1a with a field separator after every value.
struct Hasher {
  std::uint64_t h = 14695981039346656037ULL;
  void feed_bytes(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  void feed(std::string_view s) {
    feed_bytes(s);
    feed_bytes("\x1f");
  }
  void feed(long long v) { feed(std::to_string(v)); }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

}  // namespace

Procedure parse_procedure(std::string_view name) {
  if (name == "ccv") return Procedure::ccv;
  if (name == "appcat") return Procedure::app_cat;
  if (name == "scv") return Procedure::scv;
  if (name == "ccv-ext") return Procedure::ccv_ext;
  if (name == "scv-ext") return Procedure::scv_ext;
  throw ConfigError("unknown procedure '" + std::string(name) +
                    "' (expected ccv, appcat, scv, ccv-ext, or scv-ext)");
}

std::string to_string(Procedure procedure) {
  switch (procedure) {
    case Procedure::ccv: return "ccv";
    case Procedure::app_cat: return "appcat";
    case Procedure::scv: return "scv";
    case Procedure::ccv_ext: return "ccv-ext";
    case Procedure::scv_ext: return "scv-ext";
  }
  return "ccv";
}

bool uses_external(Procedure procedure) {
  return procedure == Procedure::ccv_ext || procedure == Procedure::scv_ext;
}

int eval_mode_index(MatchMode match, UnitMode unit) {
  return (unit == UnitMode::type ? 2 : 0) + (match == MatchMode::partial ? 1 : 0);
}

std::string eval_mode_name(int index) {
  const auto& [match, unit] = kEvalModes.at(static_cast<std::size_t>(index));
  return to_string(match) + "_" + to_string(unit);
}

std::string size_label_for(double avg_train_feature_tokens, long long corpus_feature_tokens) {
  if (corpus_feature_tokens <= 0) return "S";
  const double ratio = avg_train_feature_tokens / static_cast<double>(corpus_feature_tokens);
  if (ratio < 0.5) return "S";
  if (ratio <= 1.0) return "M";
  return "L";
}

TrainingSet augment_training(const Corpus& train_corpus, const std::string& annotator,
                             const std::vector<Corpus>& external_corpora) {
  TrainingSet ts;
  ts.corpus = train_corpus;
  ts.sequences = sequences_for(train_corpus, annotator);

  const auto primary_lang = train_corpus.metadata.find("language");
  for (std::size_t i = 0; i < external_corpora.size(); ++i) {
    const Corpus& external = external_corpora[i];
    const auto ext_lang = external.metadata.find("language");
    if (primary_lang != train_corpus.metadata.end() &&
        ext_lang != external.metadata.end() && primary_lang->second != ext_lang->second) {
      throw DataError("external corpus " + std::to_string(i) + " is in '" +
                      ext_lang->second + "' but the primary corpus is in '" +
                      primary_lang->second + "'");
    }
    const std::set<std::string> annotators = external.annotator_ids();
    if (annotators.size() != 1) {
      throw DataError("external corpus " + std::to_string(i) +
                      " must have exactly one annotator, found " +
                      std::to_string(annotators.size()));
    }

    std::vector<LabeledSequence> ext_sequences = bio_encode(external, *annotators.begin());
    const std::string prefix = "ext" + std::to_string(i) + ":";
    for (LabeledSequence& seq : ext_sequences) {
      seq.review_id = prefix + seq.review_id;
      ts.sequences.push_back(std::move(seq));
    }
    for (Review review : external.reviews) {
      review.id = prefix + review.id;
      ts.corpus.reviews.push_back(std::move(review));
    }
    for (AnnotationSpan span : external.annotations) {
      span.review_id = prefix + span.review_id;
      ts.corpus.annotations.push_back(std::move(span));
    }
  }
  canonicalize(ts.corpus);
  return ts;
}

std::vector<FoldPlan> plan_folds(const Corpus& corpus, const ExperimentConfig& config) {
  validate_config(corpus, config);
  std::vector<FoldPlan> plans;
  for (const Fold& fold : build_folds(corpus, config)) {
    FoldPlan plan;
    plan.fold = fold.id;
    plan.held_out = fold.held_out;
    for (int idx : fold.train) {
      plan.train_ids.push_back(corpus.reviews[static_cast<std::size_t>(idx)].id);
    }
    for (int idx : fold.test) {
      plan.test_ids.push_back(corpus.reviews[static_cast<std::size_t>(idx)].id);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

ExperimentResult cross_category_validation(const Corpus& corpus,
                                           const ExperimentConfig& config) {
  require_procedure(config, Procedure::ccv, Procedure::ccv_ext, "cross_category_validation");
  validate_config(corpus, config);
  return aggregate(corpus, config, folds_ccv(corpus));
}

ExperimentResult per_category_cv(const Corpus& corpus, const ExperimentConfig& config) {
  require_procedure(config, Procedure::app_cat, Procedure::app_cat, "per_category_cv");
  validate_config(corpus, config);
  return aggregate(corpus, config, folds_appcat(corpus, config.k_folds, config.seed));
}

ExperimentResult stratified_cv(const Corpus& corpus, const ExperimentConfig& config) {
  require_procedure(config, Procedure::scv, Procedure::scv_ext, "stratified_cv");
  validate_config(corpus, config);
  return aggregate(corpus, config, folds_scv(corpus, config.k_folds, config.seed));
}

ExperimentResult run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  switch (config.procedure) {
    case Procedure::ccv:
    case Procedure::ccv_ext:
      return cross_category_validation(corpus, config);
    case Procedure::app_cat:
      return per_category_cv(corpus, config);
    case Procedure::scv:
    case Procedure::scv_ext:
      return stratified_cv(corpus, config);
  }
  throw ConfigError("unknown procedure");
}

std::vector<SweepRow> length_cutoff_sweep(const std::vector<Corpus>& corpora,
                                          const std::vector<std::optional<int>>& cutoffs,
                                          const ExperimentConfig& config) {
  if (corpora.empty()) throw ConfigError("sweep needs at least one corpus");
  if (cutoffs.empty()) throw ConfigError("sweep needs at least one cutoff");

  ExperimentConfig ccv_config = config;
  ccv_config.procedure = Procedure::ccv;
  ccv_config.external_corpora.clear();

  std::vector<SweepRow> rows;
  for (const std::optional<int>& cutoff : cutoffs) {
    std::array<std::vector<double>, kNumEvalModes> f1s;
    for (const Corpus& corpus : corpora) {
      ExperimentResult result;
      if (cutoff.has_value()) {
        StepOptions options;
        options.annotator = config.annotator;
        result = run_experiment(cap_feature_length(corpus, *cutoff, options).first,
                                ccv_config);
      } else {
        result = run_experiment(corpus, ccv_config);
      }
      for (int m = 0; m < kNumEvalModes; ++m) {
        f1s[static_cast<std::size_t>(m)].push_back(
            result.average[static_cast<std::size_t>(m)].f1);
      }
    }
    for (int m = 0; m < kNumEvalModes; ++m) {
      const std::vector<double>& values = f1s[static_cast<std::size_t>(m)];
      SweepRow row;
      row.cutoff = cutoff.has_value() ? std::to_string(*cutoff) : "inf";
      row.match = kEvalModes[static_cast<std::size_t>(m)].first;
      row.unit = kEvalModes[static_cast<std::size_t>(m)].second;
      row.min_f1 = *std::min_element(values.begin(), values.end());
      row.max_f1 = *std::max_element(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      row.avg_f1 = sum / static_cast<double>(values.size());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string fnv1a_hex(std::string_view data) {
  Hasher hasher;
  hasher.feed_bytes(data);
  return hasher.hex();
}

std::string corpus_fingerprint(const Corpus& corpus) {
  Hasher hasher;
  for (const Review& review : corpus.reviews) {
    hasher.feed(review.id);
    hasher.feed(review.app);
    hasher.feed(review.category);
    hasher.feed(static_cast<long long>(review.rating));
    for (const Sentence& sentence : review.sentences) {
      for (const Token& token : sentence.tokens) {
        hasher.feed(token.text);
        hasher.feed(token.pos);
      }
      hasher.feed("\x1e");
    }
  }
  for (const AnnotationSpan& span : corpus.annotations) {
    hasher.feed(span.annotator);
    hasher.feed(span.review_id);
    hasher.feed(static_cast<long long>(span.sentence_index));
    hasher.feed(static_cast<long long>(span.start));
    hasher.feed(static_cast<long long>(span.end));
  }
  return hasher.hex();
}

std::string config_hash(const ExperimentConfig& config) {
  Hasher hasher;
  hasher.feed(to_string(config.procedure));
  hasher.feed(static_cast<long long>(config.k_folds));
  hasher.feed(static_cast<long long>(config.seed));
  hasher.feed(config.annotator);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", config.train.l2_lambda);
  hasher.feed(buf);
  hasher.feed(static_cast<long long>(config.train.max_iterations));
  std::snprintf(buf, sizeof buf, "%.17g", config.train.convergence_tol);
  hasher.feed(buf);
  hasher.feed(static_cast<long long>(config.features.window));
  for (int len : config.features.affix_lengths) hasher.feed(static_cast<long long>(len));
  hasher.feed(static_cast<long long>(config.features.use_pos));
  hasher.feed(static_cast<long long>(config.features.use_position));
  hasher.feed(static_cast<long long>(config.features.use_stylistics));
  hasher.feed(static_cast<long long>(config.features.use_embeddings));
  hasher.feed(static_cast<long long>(config.features.embedding_dim));
  hasher.feed(static_cast<long long>(config.external_corpora.size()));
  return hasher.hex();
}

}  // namespace revmine
