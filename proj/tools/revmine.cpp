// Command-line surface over the revmine library: corpus statistics and
// sampling, guideline simulation, tagging, evaluation, and the experiment
// harness. Every command is seed-reproducible; primary outputs carry no
// timestamps, so identical invocations write identical bytes.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or I/O error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revmine/aspect_xml.hpp"
#include "revmine/corpus.hpp"
#include "revmine/corpus_io.hpp"
#include "revmine/crf.hpp"
#include "revmine/errors.hpp"
#include "revmine/evaluation.hpp"
#include "revmine/experiments.hpp"
#include "revmine/features.hpp"
#include "revmine/guidelines.hpp"
#include "revmine/log.hpp"
#include "revmine/reports.hpp"

namespace {

using namespace revmine;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Shared plumbing

Corpus load_input(const std::string& path, const std::string& format_name) {
  const CorpusFormat format =
      format_name.empty() ? detect_format(path) : parse_format(format_name);
  return load_corpus(path, format);
}

void save_output(const Corpus& corpus, const std::string& path,
                 const std::string& format_name) {
  const CorpusFormat format =
      format_name.empty() ? detect_format(path) : parse_format(format_name);
  save_corpus(corpus, path, format);
}

/// Output paths are checked up front so long runs cannot fail at the end on
/// a mistyped directory.
void require_writable_dir(const std::string& path) {
  if (path.empty()) return;
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw ConfigError("output directory '" + parent.string() + "' does not exist");
  }
}

template <typename WriteFn>
void to_stream_or_file(const std::string& path, WriteFn write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string fixed4(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

// ---------------------------------------------------------------------------
// Tagger options shared by train, experiment, and sweep

struct TaggerOptions {
  int window = 2;
  std::vector<int> affixes = {1, 2, 3, 4};
  bool no_affixes = false;
  bool no_pos = false;
  bool no_position = false;
  bool no_stylistics = false;
  std::string embeddings_path;
  double l2 = 1.0;
  int max_iters = 200;
  double tol = 1e-5;
};

void add_tagger_options(CLI::App* cmd, TaggerOptions& opt) {
  cmd->add_option("--window", opt.window, "context window radius for word/POS features")
      ->capture_default_str();
  cmd->add_option("--affixes", opt.affixes, "prefix/suffix lengths to emit")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_flag("--no-affixes", opt.no_affixes, "drop prefix/suffix features");
  cmd->add_flag("--no-pos", opt.no_pos, "drop POS features");
  cmd->add_flag("--no-position", opt.no_position, "drop sentence-position features");
  cmd->add_flag("--no-stylistics", opt.no_stylistics, "drop capitalization/digit features");
  cmd->add_option("--embeddings", opt.embeddings_path,
                  "word vector file; enables embedding features");
  cmd->add_option("--l2", opt.l2, "L2 regularization strength")->capture_default_str();
  cmd->add_option("--max-iters", opt.max_iters, "optimizer iteration budget")
      ->capture_default_str();
  cmd->add_option("--tol", opt.tol, "relative convergence tolerance")->capture_default_str();
}

/// Loads the embedding table when a path was given; the table must outlive
/// the returned config, which only points at it.
std::optional<EmbeddingTable> maybe_embeddings(const TaggerOptions& opt) {
  if (opt.embeddings_path.empty()) return std::nullopt;
  return load_embeddings(opt.embeddings_path);
}

FeatureTemplateConfig feature_config(const TaggerOptions& opt, const EmbeddingTable* table) {
  FeatureTemplateConfig config;
  config.window = opt.window;
  config.affix_lengths =
      opt.no_affixes ? std::set<int>{} : std::set<int>(opt.affixes.begin(), opt.affixes.end());
  config.use_pos = !opt.no_pos;
  config.use_position = !opt.no_position;
  config.use_stylistics = !opt.no_stylistics;
  if (table != nullptr) {
    config.use_embeddings = true;
    config.embedding_dim = table->dim;
  }
  return config;
}

TrainConfig train_config(const TaggerOptions& opt, std::uint32_t seed) {
  TrainConfig config;
  config.l2_lambda = opt.l2;
  config.max_iterations = opt.max_iters;
  config.convergence_tol = opt.tol;
  config.seed = seed;
  return config;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::string input;
  std::string input_format;
  std::string annotator;
  std::string out;
  std::string format = "csv";
  bool per_category = false;
};

void cmd_stats(const StatsArgs& args) {
  require_writable_dir(args.out);
  const Corpus corpus = load_input(args.input, args.input_format);
  const std::optional<std::string> annotator =
      args.annotator.empty() ? std::nullopt : std::make_optional(args.annotator);
  const CorpusStats stats = compute_stats(corpus, annotator);
  const ReportFormat format = parse_report_format(args.format);
  to_stream_or_file(args.out,
                    [&](std::ostream& out) { write_stats(stats, args.per_category, format, out); });
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string input;
  std::string input_format;
  std::string out;
  std::string output_format;
  int per_app = 0;
  std::uint32_t seed = 42;
};

void cmd_sample(const SampleArgs& args) {
  require_writable_dir(args.out);
  const Corpus pool = load_input(args.input, args.input_format);
  const Corpus sample = stratified_sample(pool, args.per_app, Stratum::rating, args.seed);
  save_output(sample, args.out, args.output_format);
  std::cout << "sampled " << sample.reviews.size() << " of " << pool.reviews.size()
            << " reviews\n";
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string input;
  std::string input_format;
  std::vector<std::string> steps;
  int max_len = 3;
  std::string lexicon_path;
  std::vector<std::string> noun_tags;
  std::string annotator;
  bool keep_empty = false;
  bool fallback_pos = false;
  std::string out;
  std::string output_format;
  std::string report;
};

StepKind parse_step(const std::string& name) {
  if (name == "pre") return StepKind::preprocess;
  if (name == "self") return StepKind::self_refs;
  if (name == "noun") return StepKind::nounless;
  if (name == "len") return StepKind::length_cap;
  throw ConfigError("unknown simulation step '" + name +
                    "' (expected pre, self, noun, or len)");
}

std::set<std::string> load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon '" + path + "'");
  std::set<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t at = line.find_first_not_of(' ');
    if (at == std::string::npos || line[at] == '#') continue;
    entries.insert(line.substr(at));
  }
  return entries;
}

ordered_json stats_json(const DatasetStats& stats) {
  ordered_json j;
  j["reviews"] = stats.n_reviews;
  j["sentences"] = stats.n_sentences;
  j["feature_tokens"] = stats.feature_tokens;
  j["feature_types"] = stats.feature_types;
  j["single_word"] = stats.single_word;
  j["multi_word"] = stats.multi_word;
  j["type_token_ratio"] = stats.type_token_ratio;
  j["features_per_review"] = stats.features_per_review;
  return j;
}

void cmd_simulate(const SimulateArgs& args) {
  require_writable_dir(args.out);
  require_writable_dir(args.report);

  PipelineConfig config;
  for (const std::string& name : args.steps) config.steps.push_back(parse_step(name));
  config.max_len = args.max_len;
  if (!args.lexicon_path.empty()) config.self_ref_lexicon = load_lexicon(args.lexicon_path);
  config.noun_tags = {args.noun_tags.begin(), args.noun_tags.end()};
  if (!args.annotator.empty()) config.annotator = args.annotator;
  config.drop_empty_reviews_after_each_step = !args.keep_empty;

  Corpus corpus = load_input(args.input, args.input_format);
  if (args.fallback_pos) {
    for (Review& review : corpus.reviews) {
      for (Sentence& sentence : review.sentences) {
        const std::vector<std::string> tags = fallback_pos_tag(sentence);
        for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
          sentence.tokens[t].pos = tags[t];
        }
      }
    }
  }

  auto [result, reports] = run_pipeline(corpus, config);

  std::cout << "step,spans_removed,reviews_removed,feature_tokens_after,reviews_after\n";
  for (const RemovalReport& report : reports) {
    std::cout << report.step_name << "," << report.spans_removed << ","
              << report.reviews_removed << "," << report.stats_after.feature_tokens << ","
              << report.stats_after.n_reviews << "\n";
  }

  if (!args.out.empty()) save_output(result, args.out, args.output_format);
  if (!args.report.empty()) {
    ordered_json doc;
    doc["format"] = "revmine-simulation";
    doc["version"] = 1;
    doc["steps"] = ordered_json::array();
    for (const RemovalReport& report : reports) {
      ordered_json step;
      step["step"] = report.step_name;
      step["spans_removed"] = report.spans_removed;
      step["reviews_removed"] = report.reviews_removed;
      step["examples"] = ordered_json::array();
      for (const auto& [review_id, text, reason] : report.removed_examples) {
        ordered_json example;
        example["review"] = review_id;
        example["text"] = text;
        example["reason"] = reason;
        step["examples"].push_back(std::move(example));
      }
      step["before"] = stats_json(report.stats_before);
      step["after"] = stats_json(report.stats_after);
      doc["steps"].push_back(std::move(step));
    }
    to_stream_or_file(args.report, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
  }
}

// ---------------------------------------------------------------------------
// agreement

struct AgreementArgs {
  std::string input;
  std::string input_format;
  std::vector<std::string> annotators;
};

void cmd_agreement(const AgreementArgs& args) {
  const Corpus corpus = load_input(args.input, args.input_format);
  std::vector<std::string> names = args.annotators;
  if (names.empty()) {
    const std::set<std::string> ids = corpus.annotator_ids();
    names.assign(ids.begin(), ids.end());
  }
  if (names.size() != 2) {
    throw ConfigError("agreement needs exactly two annotators, got " +
                      std::to_string(names.size()));
  }
  const std::set<std::string> known = corpus.annotator_ids();
  for (const std::string& name : names) {
    if (!known.count(name)) throw DataError("annotator '" + name + "' has no spans");
  }

  std::vector<AnnotationSpan> a, b;
  for (const AnnotationSpan& span : corpus.annotations) {
    if (span.annotator == names[0]) a.push_back(span);
    if (span.annotator == names[1]) b.push_back(span);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", dice_agreement(a, b));
  std::cout << "dice(" << names[0] << ", " << names[1] << ") = " << buf << "\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string input;
  std::string input_format;
  std::string model;
  std::string annotator = "gold";
  std::uint32_t seed = 42;
  TaggerOptions tagger;
};

void cmd_train(const TrainArgs& args) {
  require_writable_dir(args.model);
  const Corpus corpus = load_input(args.input, args.input_format);
  const std::vector<LabeledSequence> sequences = bio_encode(corpus, args.annotator);
  const std::optional<EmbeddingTable> table = maybe_embeddings(args.tagger);
  const EmbeddingTable* table_ptr = table ? &*table : nullptr;

  const CrfModel model = train(corpus, sequences, feature_config(args.tagger, table_ptr),
                               table_ptr, train_config(args.tagger, args.seed));
  save_model(model, args.model);
  std::cout << "trained " << model.n_features() << " features in "
            << model.train_meta.iterations << " iterations, objective "
            << fixed4(model.train_meta.objective) << "\n";
}

// ---------------------------------------------------------------------------
// tag

struct TagArgs {
  std::string input;
  std::string input_format;
  std::string model;
  std::string out;
  std::string output_format;
  std::string as = "model";
  std::string embeddings_path;
};

void cmd_tag(const TagArgs& args) {
  require_writable_dir(args.out);
  Corpus corpus = load_input(args.input, args.input_format);
  const CrfModel model = load_model(args.model);

  std::optional<EmbeddingTable> table;
  if (!args.embeddings_path.empty()) table = load_embeddings(args.embeddings_path);

  std::vector<AnnotationSpan> predicted =
      predict_spans(model, corpus, table ? &*table : nullptr);

  // Predictions replace any earlier spans carrying the output annotator name.
  std::erase_if(corpus.annotations,
                [&](const AnnotationSpan& span) { return span.annotator == args.as; });
  for (AnnotationSpan& span : predicted) {
    span.annotator = args.as;
    corpus.annotations.push_back(std::move(span));
  }
  canonicalize(corpus);
  save_output(corpus, args.out, args.output_format);
  std::cout << "tagged " << predicted.size() << " spans as '" << args.as << "'\n";
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string input;
  std::string input_format;
  std::string pred = "model";
  std::string gold = "gold";
  std::string out;
  bool per_category = false;
};

void cmd_eval(const EvalArgs& args) {
  require_writable_dir(args.out);
  const Corpus corpus = load_input(args.input, args.input_format);

  std::vector<AnnotationSpan> pred, gold;
  for (const AnnotationSpan& span : corpus.annotations) {
    if (span.annotator == args.pred) pred.push_back(span);
    if (span.annotator == args.gold) gold.push_back(span);
  }
  if (gold.empty()) log_warn("no spans from gold annotator '" + args.gold + "'");
  if (pred.empty()) log_warn("no spans from predicted annotator '" + args.pred + "'");

  to_stream_or_file(args.out, [&](std::ostream& out) {
    out << "mode,category,tp,fp,fn,precision,recall,f1\n";
    for (int m = 0; m < kNumEvalModes; ++m) {
      const auto [match, unit] = kEvalModes[static_cast<std::size_t>(m)];
      const EvalReport report = unit == UnitMode::token
                                    ? evaluate_tokens(corpus, pred, gold, match)
                                    : evaluate_types(corpus, pred, gold, match);
      auto line = [&](const std::string& category, const EvalScores& s) {
        out << eval_mode_name(m) << "," << category << "," << s.tp << "," << s.fp << ","
            << s.fn << "," << fixed4(s.precision) << "," << fixed4(s.recall) << ","
            << fixed4(s.f1) << "\n";
      };
      if (args.per_category) {
        for (const auto& [category, scores] : report.per_category) line(category, scores);
      }
      line("Total", report.total);
    }
  });
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string input;
  std::string input_format;
  std::string procedure;
  int k_folds = 10;
  std::uint32_t seed = 42;
  std::string annotator = "gold";
  std::vector<std::string> external;
  int jobs = 1;
  std::string out;
  std::string format = "csv";
  std::string series;
  TaggerOptions tagger;
};

void cmd_experiment(const ExperimentArgs& args) {
  require_writable_dir(args.out);
  require_writable_dir(args.series);
  const Corpus corpus = load_input(args.input, args.input_format);
  const std::optional<EmbeddingTable> table = maybe_embeddings(args.tagger);
  const EmbeddingTable* table_ptr = table ? &*table : nullptr;

  ExperimentConfig config;
  config.procedure = parse_procedure(args.procedure);
  config.k_folds = args.k_folds;
  config.seed = args.seed;
  config.annotator = args.annotator;
  config.features = feature_config(args.tagger, table_ptr);
  config.train = train_config(args.tagger, args.seed);
  config.embeddings = table_ptr;
  config.jobs = args.jobs;
  if (uses_external(config.procedure) && args.external.empty()) {
    throw ConfigError(args.procedure + " requires at least one --external corpus");
  }
  for (const std::string& path : args.external) {
    config.external_corpora.push_back(load_input(path, ""));
  }

  const ExperimentResult result = run_experiment(corpus, config);

  write_report({result}, ReportFormat::markdown, std::cout);
  if (!args.out.empty()) {
    emit_report({result}, parse_report_format(args.format), args.out);
  }
  if (!args.series.empty()) emit_series_csv({result}, args.series);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> cutoffs = {"1", "2", "3", "4", "inf"};
  std::uint32_t seed = 42;
  std::string annotator = "gold";
  int jobs = 1;
  std::string out;
  TaggerOptions tagger;
};

void cmd_sweep(const SweepArgs& args) {
  require_writable_dir(args.out);

  std::vector<std::optional<int>> cutoffs;
  for (const std::string& name : args.cutoffs) {
    if (name == "inf" || name == "none") {
      cutoffs.push_back(std::nullopt);
      continue;
    }
    try {
      const int value = std::stoi(name);
      if (value < 1 || std::to_string(value) != name) throw std::invalid_argument(name);
      cutoffs.push_back(value);
    } catch (const std::exception&) {
      throw ConfigError("bad cutoff '" + name + "' (expected a positive integer or inf)");
    }
  }

  std::vector<Corpus> corpora;
  for (const std::string& path : args.inputs) corpora.push_back(load_input(path, ""));
  const std::optional<EmbeddingTable> table = maybe_embeddings(args.tagger);
  const EmbeddingTable* table_ptr = table ? &*table : nullptr;

  ExperimentConfig config;
  config.procedure = Procedure::ccv;
  config.seed = args.seed;
  config.annotator = args.annotator;
  config.features = feature_config(args.tagger, table_ptr);
  config.train = train_config(args.tagger, args.seed);
  config.embeddings = table_ptr;
  config.jobs = args.jobs;

  const std::vector<SweepRow> rows = length_cutoff_sweep(corpora, cutoffs, config);
  to_stream_or_file(args.out, [&](std::ostream& out) { write_sweep_csv(rows, out); });
}

// ---------------------------------------------------------------------------
// import-xml

struct ImportXmlArgs {
  std::string input;
  std::string app;
  std::string category;
  std::string out;
  std::string output_format;
};

void cmd_import_xml(const ImportXmlArgs& args) {
  require_writable_dir(args.out);
  const Corpus corpus = load_aspect_xml(args.input, args.app, args.category);
  save_output(corpus, args.out, args.output_format);
  std::cout << "imported " << corpus.reviews.size() << " reviews, "
            << corpus.annotations.size() << " spans\n";
}

void add_input_format(CLI::App* cmd, std::string& target) {
  cmd->add_option("--input-format", target, "jsonl or conll (default: by extension)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "revmine: extract app features from annotated review corpora with a "
      "CRF tagger, simulate annotation-guideline changes, and evaluate them"};
  app.require_subcommand(1);

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "corpus statistics per category");
  stats->add_option("input", stats_args.input, "corpus file")->required();
  add_input_format(stats, stats_args.input_format);
  stats->add_option("--annotator", stats_args.annotator,
                    "count only this annotator's spans (default: all)");
  stats->add_flag("--per-category", stats_args.per_category, "one row per app category");
  stats->add_option("--format", stats_args.format, "csv, markdown, or json")
      ->capture_default_str();
  stats->add_option("--out", stats_args.out, "write here instead of stdout");
  stats->callback([&] { cmd_stats(stats_args); });

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "stratified review sample per app");
  sample->add_option("input", sample_args.input, "pool corpus file")->required();
  add_input_format(sample, sample_args.input_format);
  sample->add_option("--per-app", sample_args.per_app, "reviews to draw per app")
      ->required()
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", sample_args.seed, "sampling seed")->capture_default_str();
  sample->add_option("--out", sample_args.out, "output corpus file")->required();
  sample->add_option("--output-format", sample_args.output_format,
                     "jsonl or conll (default: by extension)");
  sample->callback([&] { cmd_sample(sample_args); });

  SimulateArgs simulate_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "apply annotation-guideline steps to a corpus");
  simulate->add_option("input", simulate_args.input, "corpus file")->required();
  add_input_format(simulate, simulate_args.input_format);
  simulate
      ->add_option("--steps", simulate_args.steps,
                   "comma list drawn from pre,self,noun,len, in order")
      ->required()
      ->delimiter(',');
  simulate->add_option("--max-len", simulate_args.max_len, "span length cap for the len step")
      ->capture_default_str();
  simulate->add_option("--lexicon", simulate_args.lexicon_path,
                       "self-reference terms, one per line (default: built-in + app names)");
  simulate
      ->add_option("--noun-tags", simulate_args.noun_tags,
                   "POS tags counting as nouns (default: NN,NNS,NNP,NNPS)")
      ->delimiter(',');
  simulate->add_option("--annotator", simulate_args.annotator,
                       "scope emptiness checks to this annotator");
  simulate->add_flag("--keep-empty", simulate_args.keep_empty,
                     "keep reviews whose spans were all removed");
  simulate->add_flag("--fallback-pos", simulate_args.fallback_pos,
                     "fill missing POS tags with the heuristic tagger first");
  simulate->add_option("--out", simulate_args.out, "write the transformed corpus here");
  simulate->add_option("--output-format", simulate_args.output_format,
                       "jsonl or conll (default: by extension)");
  simulate->add_option("--report", simulate_args.report, "write a JSON removal report here");
  simulate->callback([&] { cmd_simulate(simulate_args); });

  AgreementArgs agreement_args;
  CLI::App* agreement =
      app.add_subcommand("agreement", "Dice agreement between two annotators");
  agreement->add_option("input", agreement_args.input, "corpus file")->required();
  add_input_format(agreement, agreement_args.input_format);
  agreement
      ->add_option("--annotators", agreement_args.annotators,
                   "the two annotators to compare (default: the corpus's two)")
      ->delimiter(',');
  agreement->callback([&] { cmd_agreement(agreement_args); });

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a CRF tagger on gold spans");
  train->add_option("input", train_args.input, "training corpus file")->required();
  add_input_format(train, train_args.input_format);
  train->add_option("--model", train_args.model, "model JSON output path")->required();
  train->add_option("--annotator", train_args.annotator, "whose spans are gold")
      ->capture_default_str();
  train->add_option("--seed", train_args.seed, "training seed")->capture_default_str();
  add_tagger_options(train, train_args.tagger);
  train->callback([&] { cmd_train(train_args); });

  TagArgs tag_args;
  CLI::App* tag = app.add_subcommand("tag", "predict feature spans with a trained model");
  tag->add_option("input", tag_args.input, "corpus file")->required();
  add_input_format(tag, tag_args.input_format);
  tag->add_option("--model", tag_args.model, "model JSON path")->required();
  tag->add_option("--out", tag_args.out, "output corpus file")->required();
  tag->add_option("--output-format", tag_args.output_format,
                  "jsonl or conll (default: by extension)");
  tag->add_option("--as", tag_args.as, "annotator name for the predictions")
      ->capture_default_str();
  tag->add_option("--embeddings", tag_args.embeddings_path,
                  "word vectors (required when the model uses them)");
  tag->callback([&] { cmd_tag(tag_args); });

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score one annotator against another");
  eval->add_option("input", eval_args.input, "corpus carrying both annotators")->required();
  add_input_format(eval, eval_args.input_format);
  eval->add_option("--pred", eval_args.pred, "predicted annotator")->capture_default_str();
  eval->add_option("--gold", eval_args.gold, "gold annotator")->capture_default_str();
  eval->add_flag("--per-category", eval_args.per_category, "add per-category rows");
  eval->add_option("--out", eval_args.out, "write here instead of stdout");
  eval->callback([&] { cmd_eval(eval_args); });

  ExperimentArgs experiment_args;
  CLI::App* experiment =
      app.add_subcommand("experiment", "run a training/evaluation procedure");
  experiment->add_option("input", experiment_args.input, "corpus file")->required();
  add_input_format(experiment, experiment_args.input_format);
  experiment
      ->add_option("--procedure", experiment_args.procedure,
                   "ccv, appcat, scv, ccv-ext, or scv-ext")
      ->required();
  experiment->add_option("--k", experiment_args.k_folds, "folds per category or corpus")
      ->capture_default_str();
  experiment->add_option("--seed", experiment_args.seed, "fold and training seed")
      ->capture_default_str();
  experiment->add_option("--annotator", experiment_args.annotator, "whose spans are gold")
      ->capture_default_str();
  experiment->add_option("--external", experiment_args.external,
                         "external training corpus (repeatable; *-ext only)");
  experiment->add_option("--jobs", experiment_args.jobs, "folds to run concurrently")
      ->capture_default_str();
  experiment->add_option("--out", experiment_args.out, "write a machine-readable report here");
  experiment->add_option("--format", experiment_args.format, "csv, markdown, or json for --out")
      ->capture_default_str();
  experiment->add_option("--series", experiment_args.series, "write a min/avg/max F1 CSV here");
  add_tagger_options(experiment, experiment_args.tagger);
  experiment->callback([&] { cmd_experiment(experiment_args); });

  SweepArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "cross-category F1 across feature-length cutoffs");
  sweep->add_option("inputs", sweep_args.inputs, "one or more corpus files")
      ->required()
      ->expected(-1);
  sweep->add_option("--cutoffs", sweep_args.cutoffs, "lengths to cap at; inf = no cap")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "fold and training seed")->capture_default_str();
  sweep->add_option("--annotator", sweep_args.annotator, "whose spans are gold")
      ->capture_default_str();
  sweep->add_option("--jobs", sweep_args.jobs, "folds to run concurrently")
      ->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "write the sweep CSV here instead of stdout");
  add_tagger_options(sweep, sweep_args.tagger);
  sweep->callback([&] { cmd_sweep(sweep_args); });

  ImportXmlArgs import_args;
  CLI::App* import_xml =
      app.add_subcommand("import-xml", "convert an aspect-term XML file to a corpus");
  import_xml->add_option("input", import_args.input, "XML file")->required();
  import_xml->add_option("--app", import_args.app, "app name for the imported reviews")
      ->required();
  import_xml->add_option("--category", import_args.category, "category for the imported reviews")
      ->required();
  import_xml->add_option("--out", import_args.out, "output corpus file")->required();
  import_xml->add_option("--output-format", import_args.output_format,
                         "jsonl or conll (default: by extension)");
  import_xml->callback([&] { cmd_import_xml(import_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
