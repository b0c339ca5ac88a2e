#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/errors.hpp"
#include "revmine/guidelines.hpp"
#include "revmine/rng.hpp"
#include "support/builders.hpp"

using namespace revmine;
using testing::make_review;
using testing::make_span;

namespace {

Corpus tag_all(Corpus corpus) {
  for (auto& review : corpus.reviews)
    for (auto& sentence : review.sentences) {
      auto tags = fallback_pos_tag(sentence);
      for (std::size_t t = 0; t < tags.size(); ++t) sentence.tokens[t].pos = tags[t];
    }
  return corpus;
}

bool spans_subset_identical(const Corpus& after, const Corpus& before) {
  for (const auto& span : after.annotations)
    if (std::find(before.annotations.begin(), before.annotations.end(), span) ==
        before.annotations.end())
      return false;
  return true;
}

void check_report_arithmetic(const RemovalReport& report) {
  CHECK(report.spans_removed ==
        report.stats_before.feature_tokens - report.stats_after.feature_tokens);
  CHECK(report.reviews_removed == report.stats_before.n_reviews - report.stats_after.n_reviews);
  CHECK(report.spans_removed >= 0);
  CHECK(report.reviews_removed >= 0);
}

}  // namespace

TEST_CASE("preprocess drops feature-less reviews") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0", "w1"}}));
  corpus.reviews.push_back(make_review("r2", "a", "Cat", 3, {{"w0"}}));
  corpus.reviews.push_back(make_review("r3", "a", "Cat", 2, {{"w0", "w1"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 1), make_span("a1", "r3", 0, 1, 2)};
  canonicalize(corpus);

  auto [out, report] = preprocess(corpus);
  CHECK(out.reviews.size() == 2);
  CHECK(report.reviews_removed == 1);
  CHECK(report.spans_removed == 0);
  CHECK(out.find_review("r2") == nullptr);
  check_report_arithmetic(report);

  auto [again, report2] = preprocess(out);
  CHECK(content_equal(again, out));
  CHECK(report2.reviews_removed == 0);
}

TEST_CASE("preprocess on an all-annotated corpus is the identity") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 1)};
  auto [out, report] = preprocess(corpus);
  CHECK(content_equal(out, corpus));
  CHECK(report.reviews_removed == 0);
}

TEST_CASE("preprocess on a span-free corpus empties it") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0"}}));
  auto [out, report] = preprocess(corpus);
  CHECK(out.reviews.empty());
  CHECK(report.reviews_removed == 1);
}

TEST_CASE("preprocess with an active annotator ignores other annotators' spans") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0"}}));
  corpus.annotations = {make_span("a2", "r1", 0, 0, 1)};
  StepOptions opt;
  opt.annotator = "a1";
  auto [out, report] = preprocess(corpus, opt);
  CHECK(out.reviews.empty());
  CHECK(report.reviews_removed == 1);
  CHECK(report.spans_removed == 1);  // a2's span went down with the review
  check_report_arithmetic(report);
}

TEST_CASE("self-reference spans are removed, derived features kept") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("p1", "Pinterest", "Social", 4,
                                       {{"the", "app", "crashes"},
                                        {"pinterest", "is", "great"},
                                        {"app", "store", "sync", "works"}}));
  corpus.annotations = {
      make_span("a1", "p1", 0, 1, 2),  // "app" -> removed (lexicon)
      make_span("a1", "p1", 1, 0, 1),  // "pinterest" -> removed (own app name)
      make_span("a1", "p1", 2, 0, 3),  // "app store sync" -> kept
  };
  canonicalize(corpus);
  auto [out, report] = remove_self_references(corpus);
  CHECK(report.spans_removed == 2);
  REQUIRE(out.annotations.size() == 1);
  CHECK(span_text(out, out.annotations[0]) == "app store sync");
  check_report_arithmetic(report);
}

TEST_CASE("self-reference matching covers every app name in the corpus") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("p1", "Pinterest", "Social", 4, {{"Evernote", "rocks"}}));
  corpus.reviews.push_back(make_review("e1", "Evernote", "Productivity", 4, {{"sync", "fails"}}));
  corpus.annotations = {make_span("a1", "p1", 0, 0, 1),   // "Evernote" inside a Pinterest review
                        make_span("a1", "e1", 0, 0, 1)};  // "sync"
  canonicalize(corpus);
  auto [out, report] = remove_self_references(corpus);
  CHECK(report.spans_removed == 1);
  CHECK(out.find_review("p1") == nullptr);  // lost its only span, then dropped
  CHECK(out.annotations.size() == 1);
  CHECK(out.annotations[0].review_id == "e1");
}

TEST_CASE("a custom lexicon replaces the default set but not the own-app rule") {
  Corpus corpus;
  corpus.reviews.push_back(
      make_review("p1", "Pinterest", "Social", 4, {{"app", "pinterest", "widget"}}));
  corpus.annotations = {make_span("a1", "p1", 0, 0, 1), make_span("a1", "p1", 0, 1, 2),
                        make_span("a1", "p1", 0, 2, 3)};
  canonicalize(corpus);
  auto [out, report] = remove_self_references(corpus, {"widget"});
  // "widget" (lexicon) and "pinterest" (own app) go; "app" survives.
  CHECK(report.spans_removed == 2);
  REQUIRE(out.annotations.size() == 1);
  CHECK(span_text(out, out.annotations[0]) == "app");
}

TEST_CASE("nounless spans are removed when no token is a noun") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4,
                                       {{"to", "upload"}, {"to", "upload", "video"}, {"video"}},
                                       {{"TO", "VB"}, {"TO", "VB", "NN"}, {"NN"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 2), make_span("a1", "r1", 1, 0, 3),
                        make_span("a1", "r1", 2, 0, 1)};
  canonicalize(corpus);
  auto [out, report] = remove_nounless(corpus);
  CHECK(report.spans_removed == 1);
  CHECK(out.annotations.size() == 2);
  for (const auto& span : out.annotations) CHECK(span.sentence_index != 0);
  check_report_arithmetic(report);
}

TEST_CASE("nounless respects a custom noun tag set") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"running"}}, {{"VBG"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 1)};
  auto [removed, r1] = remove_nounless(corpus);
  CHECK(removed.annotations.empty());
  auto [kept, r2] = remove_nounless(corpus, {"VBG"});
  CHECK(kept.annotations.size() == 1);
}

TEST_CASE("nounless demands POS on span tokens and names the offender") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"mystery", "word"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 1)};
  try {
    remove_nounless(corpus);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("mystery") != std::string::npos);
  }
}

TEST_CASE("untagged tokens outside spans do not bother the noun step") {
  Corpus corpus;
  corpus.reviews.push_back(
      make_review("r1", "a", "Cat", 4, {{"untagged", "video"}}, {{"", "NN"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 1, 2)};
  CHECK_NOTHROW(remove_nounless(corpus));
}

TEST_CASE("length cap removes long spans inclusively at the boundary") {
  Corpus corpus;
  corpus.reviews.push_back(make_review(
      "r1", "a", "Cat", 4,
      {{"sorting", "functionality", "in", "board", "section"}, {"to", "upload", "video"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 5), make_span("a1", "r1", 1, 0, 3)};
  canonicalize(corpus);
  auto [out, report] = cap_feature_length(corpus, 3);
  CHECK(report.spans_removed == 1);
  REQUIRE(out.annotations.size() == 1);
  CHECK(span_text(out, out.annotations[0]) == "to upload video");
  CHECK(std::get<1>(report.removed_examples[0]) == "sorting functionality in board section");
}

TEST_CASE("length cap of one keeps only single-word spans") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0", "w1", "w2"}}));
  corpus.annotations = {make_span("a1", "r1", 0, 0, 1), make_span("a1", "r1", 0, 1, 3)};
  canonicalize(corpus);
  auto [out, report] = cap_feature_length(corpus, 1);
  REQUIRE(out.annotations.size() == 1);
  CHECK(out.annotations[0].end - out.annotations[0].start == 1);
  CHECK_THROWS_AS(cap_feature_length(corpus, 0), ConfigError);
}

TEST_CASE("run_pipeline chains reports and enforces step order") {
  Corpus corpus = tag_all([] {
    Corpus c;
    c.reviews.push_back(make_review("p1", "Pinterest", "Social", 4,
                                    {{"pinterest", "crashes", "a", "lot", "today", "again"}}));
    c.reviews.push_back(make_review("p2", "Pinterest", "Social", 2, {{"empty", "review"}}));
    c.annotations = {
        make_span("a1", "p1", 0, 0, 1),  // self reference
        make_span("a1", "p1", 0, 1, 2),  // "crashes" kept throughout
        make_span("a1", "p1", 0, 2, 6),  // 4 tokens, capped at 3
    };
    canonicalize(c);
    return c;
  }());

  PipelineConfig config;
  config.steps = {StepKind::preprocess, StepKind::self_refs, StepKind::nounless,
                  StepKind::length_cap};
  auto [out, reports] = run_pipeline(corpus, config);
  REQUIRE(reports.size() == 4);
  for (std::size_t k = 0; k + 1 < reports.size(); ++k)
    CHECK(reports[k].stats_after == reports[k + 1].stats_before);
  for (const auto& r : reports) check_report_arithmetic(r);
  CHECK(reports[0].reviews_removed == 1);   // p2
  CHECK(reports[1].spans_removed == 1);     // "pinterest"
  CHECK(reports[3].spans_removed == 1);     // the 4-token span
  REQUIRE(out.annotations.size() == 1);
  CHECK(span_text(out, out.annotations[0]) == "crashes");

  // Same pipeline on its own output removes nothing.
  auto [out2, reports2] = run_pipeline(out, config);
  CHECK(content_equal(out2, out));
  for (const auto& r : reports2) {
    CHECK(r.spans_removed == 0);
    CHECK(r.reviews_removed == 0);
  }

  PipelineConfig bad;
  bad.steps = {StepKind::nounless, StepKind::self_refs};
  CHECK_THROWS_AS(run_pipeline(corpus, bad), ConfigError);
  bad.steps = {StepKind::length_cap, StepKind::length_cap};
  CHECK_THROWS_AS(run_pipeline(corpus, bad), ConfigError);
  bad.enforce_order = false;
  bad.steps = {StepKind::nounless, StepKind::self_refs};
  CHECK_NOTHROW(run_pipeline(corpus, bad));
}

TEST_CASE("empty step list returns the corpus unchanged") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a", "Cat", 4, {{"w0"}}));
  auto [out, reports] = run_pipeline(corpus, PipelineConfig{});
  CHECK(content_equal(out, corpus));
  CHECK(reports.empty());
}

TEST_CASE("every step is idempotent, monotone and removal-only on random corpora") {
  auto rng = make_rng(37);
  using Step = std::function<std::pair<Corpus, RemovalReport>(const Corpus&)>;
  std::vector<Step> steps = {
      [](const Corpus& c) { return preprocess(c); },
      [](const Corpus& c) { return remove_self_references(c); },
      [](const Corpus& c) { return remove_nounless(c); },
      [](const Corpus& c) { return cap_feature_length(c, 2); },
  };
  for (int iter = 0; iter < 60; ++iter) {
    Corpus corpus = tag_all(testing::random_corpus(rng, {.n_annotators_max = 2}));
    for (const auto& step : steps) {
      auto [once, report] = step(corpus);
      check_report_arithmetic(report);
      CHECK(once.reviews.size() <= corpus.reviews.size());
      CHECK(once.annotations.size() <= corpus.annotations.size());
      CHECK(spans_subset_identical(once, corpus));
      CHECK(static_cast<int>(report.removed_examples.size()) >= report.spans_removed);

      auto [twice, report2] = step(once);
      CHECK(content_equal(twice, once));
      CHECK(report2.spans_removed == 0);
      CHECK(report2.reviews_removed == 0);
    }
  }
}
