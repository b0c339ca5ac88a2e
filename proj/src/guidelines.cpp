#include "revmine/guidelines.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "revmine/errors.hpp"

namespace revmine {
namespace {

std::string ascii_lower(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

/// Removes spans flagged by `reason_for` (empty optional = keep), then drops
/// newly feature-less reviews. Surviving reviews and spans are copied
/// verbatim.
std::pair<Corpus, RemovalReport> apply_removal(
    const Corpus& corpus, const std::string& step_name,
    const std::function<std::optional<std::string>(const AnnotationSpan&)>& reason_for,
    const StepOptions& opt, bool always_drop_empty) {
  RemovalReport report;
  report.step_name = step_name;
  report.stats_before = compute_stats(corpus).total;

  std::vector<AnnotationSpan> kept;
  std::map<std::string, int> live_spans;  // review id -> spans that keep it alive
  for (const auto& span : corpus.annotations) {
    if (auto reason = reason_for(span)) {
      report.removed_examples.emplace_back(span.review_id, span_text(corpus, span), *reason);
      continue;
    }
    kept.push_back(span);
    if (!opt.annotator || span.annotator == *opt.annotator) live_spans[span.review_id] += 1;
  }

  Corpus out;
  out.metadata = corpus.metadata;
  bool drop_empty = always_drop_empty || opt.drop_empty_reviews;
  std::set<std::string> dropped;
  for (const auto& review : corpus.reviews) {
    if (drop_empty && live_spans[review.id] == 0) {
      dropped.insert(review.id);
      continue;
    }
    out.reviews.push_back(review);
  }
  for (auto& span : kept) {
    if (dropped.count(span.review_id)) {
      report.removed_examples.emplace_back(span.review_id, span_text(corpus, span),
                                           "review dropped (no remaining app features)");
      continue;
    }
    out.annotations.push_back(std::move(span));
  }
  canonicalize(out);

  report.stats_after = compute_stats(out).total;
  report.spans_removed = report.stats_before.feature_tokens - report.stats_after.feature_tokens;
  report.reviews_removed = report.stats_before.n_reviews - report.stats_after.n_reviews;
  return {std::move(out), std::move(report)};
}

}  // namespace

std::pair<Corpus, RemovalReport> preprocess(const Corpus& corpus, const StepOptions& opt) {
  return apply_removal(
      corpus, "preprocess", [](const AnnotationSpan&) { return std::nullopt; }, opt,
      /*always_drop_empty=*/true);
}

std::pair<Corpus, RemovalReport> remove_self_references(const Corpus& corpus,
                                                        std::set<std::string> lexicon,
                                                        const StepOptions& opt) {
  if (lexicon.empty()) {
    lexicon = {"app", "apps", "application", "applications"};
    for (const auto& review : corpus.reviews) lexicon.insert(ascii_lower(review.app));
  }
  std::map<std::string, std::string> app_of;
  for (const auto& review : corpus.reviews) app_of[review.id] = ascii_lower(review.app);

  auto reason_for = [&](const AnnotationSpan& span) -> std::optional<std::string> {
    std::string text = ascii_lower(span_text(corpus, span));
    if (lexicon.count(text)) return "self-reference '" + text + "'";
    if (text == app_of.at(span.review_id)) return "names its own app '" + text + "'";
    return std::nullopt;
  };
  return apply_removal(corpus, "self_refs", reason_for, opt, /*always_drop_empty=*/false);
}

std::pair<Corpus, RemovalReport> remove_nounless(const Corpus& corpus,
                                                 std::set<std::string> noun_tags,
                                                 const StepOptions& opt) {
  if (noun_tags.empty()) noun_tags = {"NN", "NNS", "NNP", "NNPS"};

  auto reason_for = [&](const AnnotationSpan& span) -> std::optional<std::string> {
    const Review* review = corpus.find_review(span.review_id);
    const Sentence& sentence =
        review->sentences[static_cast<std::size_t>(span.sentence_index)];
    bool has_noun = false;
    for (int t = span.start; t < span.end; ++t) {
      const Token& token = sentence.tokens[static_cast<std::size_t>(t)];
      if (token.pos.empty())
        throw DataError("token '" + token.text + "' in review '" + span.review_id +
                        "' has no POS tag; tag the corpus before the noun step");
      if (noun_tags.count(token.pos)) has_noun = true;
    }
    if (has_noun) return std::nullopt;
    return std::string("contains no noun");
  };
  return apply_removal(corpus, "nounless", reason_for, opt, /*always_drop_empty=*/false);
}

std::pair<Corpus, RemovalReport> cap_feature_length(const Corpus& corpus, int max_len,
                                                    const StepOptions& opt) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  auto reason_for = [&](const AnnotationSpan& span) -> std::optional<std::string> {
    int len = span.end - span.start;
    if (len <= max_len) return std::nullopt;
    return "length " + std::to_string(len) + " > " + std::to_string(max_len);
  };
  return apply_removal(corpus, "length_cap", reason_for, opt, /*always_drop_empty=*/false);
}

std::string to_string(StepKind step) {
  switch (step) {
    case StepKind::preprocess: return "preprocess";
    case StepKind::self_refs: return "self_refs";
    case StepKind::nounless: return "nounless";
    default: return "length_cap";
  }
}

std::pair<Corpus, std::vector<RemovalReport>> run_pipeline(const Corpus& corpus,
                                                           const PipelineConfig& config) {
  if (config.enforce_order) {
    int last = -1;
    for (StepKind step : config.steps) {
      int rank = static_cast<int>(step);
      if (rank <= last)
        throw ConfigError("pipeline steps must appear at most once, in the order "
                          "preprocess, self_refs, nounless, length_cap");
      last = rank;
    }
  }

  StepOptions opt;
  opt.annotator = config.annotator;
  opt.drop_empty_reviews = config.drop_empty_reviews_after_each_step;

  Corpus current = corpus;
  std::vector<RemovalReport> reports;
  for (StepKind step : config.steps) {
    std::pair<Corpus, RemovalReport> result = [&] {
      switch (step) {
        case StepKind::preprocess:
          return preprocess(current, opt);
        case StepKind::self_refs:
          return remove_self_references(current, config.self_ref_lexicon, opt);
        case StepKind::nounless:
          return remove_nounless(current, config.noun_tags, opt);
        default:
          return cap_feature_length(current, config.max_len, opt);
      }
    }();
    current = std::move(result.first);
    reports.push_back(std::move(result.second));
  }
  return {std::move(current), std::move(reports)};
}

}  // namespace revmine
