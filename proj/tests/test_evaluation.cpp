#include <doctest.h>

#include <string>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/errors.hpp"
#include "revmine/evaluation.hpp"
#include "revmine/rng.hpp"
#include "support/builders.hpp"

using namespace revmine;
using testing::make_review;
using testing::make_span;

namespace {

// One sentence "failed to upload video to camera roll" used by the
// span-matching examples; positions: 0..6.
Corpus sentence_fixture() {
  Corpus corpus;
  corpus.reviews.push_back(make_review(
      "r1", "photoshare", "Photography", 4,
      {{"failed", "to", "upload", "video", "to", "camera", "roll"}}));
  return corpus;
}

AnnotationSpan at(int start, int end, const char* who = "x") {
  return make_span(who, "r1", 0, start, end);
}

}  // namespace

TEST_CASE("partial match allows a one-word difference") {
  // pred "upload video" {2,3} vs gold "to upload video" {1,2,3}
  CHECK(spans_match(at(2, 4), at(1, 4), MatchMode::partial));
  CHECK_FALSE(spans_match(at(2, 4), at(1, 4), MatchMode::exact));
}

TEST_CASE("partial match rejects a two-word difference") {
  // pred "video" {3} vs gold "to upload video" {1,2,3}
  CHECK_FALSE(spans_match(at(3, 4), at(1, 4), MatchMode::partial));
  // pred "failed to upload video to" {0..4} vs gold "to upload video" {1,2,3}
  CHECK_FALSE(spans_match(at(0, 5), at(1, 4), MatchMode::partial));
}

TEST_CASE("partial match requires overlap") {
  CHECK_FALSE(spans_match(at(0, 1), at(1, 2), MatchMode::partial));
}

TEST_CASE("shifted overlap of equal lengths is not a partial match") {
  // {1,2,3} vs {2,3,4}: overlap 2, symmetric difference 2
  CHECK_FALSE(spans_match(at(1, 4), at(2, 5), MatchMode::partial));
}

TEST_CASE("identical spans match in both modes") {
  CHECK(spans_match(at(2, 4), at(2, 4), MatchMode::exact));
  CHECK(spans_match(at(2, 4), at(2, 4), MatchMode::partial));
}

TEST_CASE("spans in different sentences or reviews never match") {
  auto a = make_span("x", "r1", 0, 0, 2);
  auto b = make_span("x", "r1", 1, 0, 2);
  auto c = make_span("x", "r2", 0, 0, 2);
  CHECK_FALSE(spans_match(a, b, MatchMode::partial));
  CHECK_FALSE(spans_match(a, c, MatchMode::exact));
}

TEST_CASE("evaluate_tokens scores the worked example both ways") {
  Corpus corpus = sentence_fixture();
  std::vector<AnnotationSpan> pred = {at(2, 4, "pred")};  // "upload video"
  std::vector<AnnotationSpan> gold = {at(1, 4, "gold")};  // "to upload video"

  auto exact = evaluate_tokens(corpus, pred, gold, MatchMode::exact);
  CHECK(exact.total.tp == 0);
  CHECK(exact.total.fp == 1);
  CHECK(exact.total.fn == 1);
  CHECK(exact.total.f1 == 0.0);

  auto partial = evaluate_tokens(corpus, pred, gold, MatchMode::partial);
  CHECK(partial.total.tp == 1);
  CHECK(partial.total.fp == 0);
  CHECK(partial.total.fn == 0);
  CHECK(partial.total.precision == 1.0);
  CHECK(partial.total.recall == 1.0);
  CHECK(partial.total.f1 == 1.0);
}

TEST_CASE("evaluate_tokens on identical sets gives perfect scores") {
  Corpus corpus = sentence_fixture();
  std::vector<AnnotationSpan> spans = {at(0, 1), at(2, 4)};
  auto report = evaluate_tokens(corpus, spans, spans, MatchMode::exact);
  CHECK(report.total.precision == 1.0);
  CHECK(report.total.recall == 1.0);
  CHECK(report.total.f1 == 1.0);
}

TEST_CASE("matching is one-to-one: two near predictions, one gold") {
  Corpus corpus = sentence_fixture();
  std::vector<AnnotationSpan> pred = {at(1, 4, "p"), at(2, 4, "p")};
  std::vector<AnnotationSpan> gold = {at(1, 4, "g")};
  auto report = evaluate_tokens(corpus, pred, gold, MatchMode::partial);
  CHECK(report.total.tp == 1);
  CHECK(report.total.fp == 1);
  CHECK(report.total.fn == 0);
}

TEST_CASE("evaluate_tokens breaks scores down per category") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "a1", "Photography", 4, {{"w0", "w1"}}));
  corpus.reviews.push_back(make_review("r2", "a2", "Travel", 2, {{"w0", "w1"}}));
  std::vector<AnnotationSpan> gold = {make_span("g", "r1", 0, 0, 1),
                                      make_span("g", "r2", 0, 0, 1)};
  std::vector<AnnotationSpan> pred = {make_span("p", "r1", 0, 0, 1),
                                      make_span("p", "r2", 0, 1, 2)};
  auto report = evaluate_tokens(corpus, pred, gold, MatchMode::exact);
  CHECK(report.total.tp == 1);
  CHECK(report.per_category.at("Photography").tp == 1);
  CHECK(report.per_category.at("Photography").f1 == 1.0);
  CHECK(report.per_category.at("Travel").tp == 0);
  CHECK(report.per_category.at("Travel").fp == 1);
  CHECK(report.per_category.at("Travel").fn == 1);
}

TEST_CASE("empty prediction or gold lists give zero scores") {
  Corpus corpus = sentence_fixture();
  std::vector<AnnotationSpan> some = {at(0, 1)};
  auto no_pred = evaluate_tokens(corpus, {}, some, MatchMode::partial);
  CHECK(no_pred.total.precision == 0.0);
  CHECK(no_pred.total.recall == 0.0);
  CHECK(no_pred.total.fn == 1);
  auto no_gold = evaluate_tokens(corpus, some, {}, MatchMode::partial);
  CHECK(no_gold.total.fp == 1);
  CHECK(no_gold.total.f1 == 0.0);
}

TEST_CASE("type_key stems and joins words") {
  CHECK(type_key({"upload", "videos"}) == "upload video");
  CHECK(type_key({"Video"}) == type_key({"videos"}));
  CHECK(type_key({"Editing"}) == "edit");
  CHECK(type_key({"L\xc3\xa4uft"}, Language::none) == "l\xc3\xa4uft");
}

TEST_CASE("evaluate_types counts each type once") {
  Corpus corpus;
  corpus.reviews.push_back(
      make_review("r1", "app", "Cat", 4, {{"video", "video", "videos", "video"}}));
  std::vector<AnnotationSpan> gold = {make_span("g", "r1", 0, 0, 1), make_span("g", "r1", 0, 1, 2),
                                      make_span("g", "r1", 0, 2, 3)};
  std::vector<AnnotationSpan> pred = {make_span("p", "r1", 0, 3, 4)};
  auto report = evaluate_types(corpus, pred, gold, MatchMode::exact);
  CHECK(report.total.tp == 1);
  CHECK(report.total.fp == 0);
  CHECK(report.total.fn == 0);
  CHECK(report.total.f1 == 1.0);
}

TEST_CASE("type-level partial matching allows one stem of difference") {
  Corpus corpus;
  corpus.reviews.push_back(make_review(
      "r1", "app", "Cat", 4, {{"to", "upload", "videos"}, {"upload", "video"}}));
  std::vector<AnnotationSpan> gold = {make_span("g", "r1", 0, 0, 3)};  // "to upload videos"
  std::vector<AnnotationSpan> pred = {make_span("p", "r1", 1, 0, 2)};  // "upload video"
  auto exact = evaluate_types(corpus, pred, gold, MatchMode::exact);
  CHECK(exact.total.tp == 0);
  auto partial = evaluate_types(corpus, pred, gold, MatchMode::partial);
  CHECK(partial.total.tp == 1);
  CHECK(partial.total.f1 == 1.0);
}

TEST_CASE("disjoint type sets score zero") {
  Corpus corpus;
  corpus.reviews.push_back(make_review("r1", "app", "Cat", 4, {{"sound", "screen"}}));
  std::vector<AnnotationSpan> gold = {make_span("g", "r1", 0, 0, 1)};
  std::vector<AnnotationSpan> pred = {make_span("p", "r1", 0, 1, 2)};
  auto report = evaluate_types(corpus, pred, gold, MatchMode::partial);
  CHECK(report.total.precision == 0.0);
  CHECK(report.total.recall == 0.0);
  CHECK(report.total.f1 == 0.0);
}

TEST_CASE("macro_average means the scores") {
  EvalScores a = make_scores(1, 4, 4);  // P=R=0.2
  EvalScores b = make_scores(2, 3, 3);  // P=R=0.4
  auto avg = macro_average({a, b});
  CHECK(avg.precision == doctest::Approx(0.3));
  CHECK(avg.recall == doctest::Approx(0.3));
  CHECK(avg.f1 == doctest::Approx((a.f1 + b.f1) / 2));
  CHECK(avg.tp == 3);

  auto one = macro_average({a});
  CHECK(one.precision == a.precision);
  CHECK(one.f1 == a.f1);

  CHECK_THROWS_AS(macro_average({}), ConfigError);
}

TEST_CASE("macro_average reproduces a published six-category average") {
  std::vector<EvalScores> cats;
  for (double p : {0.460, 0.265, 0.535, 0.265, 0.436, 0.375}) {
    EvalScores s;
    s.precision = p;
    cats.push_back(s);
  }
  auto avg = macro_average(cats);
  CHECK(avg.precision * 100.0 == doctest::Approx(38.9).epsilon(0.0015));
}

TEST_CASE("dice agreement formula and conventions") {
  auto span = [](const char* rid, int s, int a, int b) { return make_span("x", rid, s, a, b); };
  std::vector<AnnotationSpan> a3 = {span("r1", 0, 0, 1), span("r1", 0, 2, 3), span("r2", 0, 0, 1)};
  CHECK(dice_agreement(a3, a3) == 1.0);

  std::vector<AnnotationSpan> b5 = {span("r3", 0, 0, 1), span("r3", 0, 1, 2), span("r3", 0, 2, 3),
                                    span("r4", 0, 0, 1), span("r4", 0, 1, 2)};
  CHECK(dice_agreement(a3, b5) == 0.0);

  std::vector<AnnotationSpan> a4 = {span("r1", 0, 0, 1), span("r1", 0, 2, 3), span("r2", 0, 0, 1),
                                    span("r2", 0, 1, 2)};
  std::vector<AnnotationSpan> b6 = {span("r1", 0, 0, 1), span("r1", 0, 2, 3), span("r5", 0, 0, 1),
                                    span("r5", 0, 1, 2), span("r5", 0, 2, 3), span("r5", 0, 3, 4)};
  CHECK(dice_agreement(a4, b6) == doctest::Approx(0.4));
  CHECK(dice_agreement(b6, a4) == doctest::Approx(0.4));

  CHECK(dice_agreement({}, {}) == 1.0);
  CHECK(dice_agreement(a3, {}) == 0.0);
}

TEST_CASE("partial scores dominate exact scores on random inputs") {
  auto rng = make_rng(31);
  for (int iter = 0; iter < 60; ++iter) {
    Corpus corpus = testing::random_corpus(rng, {.n_annotators_max = 2});
    auto ids = corpus.annotator_ids();
    if (ids.empty()) continue;
    std::vector<AnnotationSpan> gold, pred;
    for (const auto& span : corpus.annotations)
      if (span.annotator == *ids.begin()) gold.push_back(span);
    // Perturbed copy of gold: drop some, nudge some ends.
    for (const auto& g : gold) {
      auto roll = bounded_rand(rng, 4);
      if (roll == 0) continue;
      AnnotationSpan p = g;
      p.annotator = "pred";
      if (roll == 1 && p.end - p.start > 1) p.start += 1;
      pred.push_back(p);
    }
    for (UnitMode unit : {UnitMode::token, UnitMode::type}) {
      auto eval = [&](MatchMode m) {
        return unit == UnitMode::token ? evaluate_tokens(corpus, pred, gold, m)
                                       : evaluate_types(corpus, pred, gold, m);
      };
      auto exact = eval(MatchMode::exact);
      auto partial = eval(MatchMode::partial);
      CHECK(partial.total.tp >= exact.total.tp);
      CHECK(partial.total.precision >= exact.total.precision);
      CHECK(partial.total.recall >= exact.total.recall);
      CHECK(partial.total.f1 >= exact.total.f1);
      CHECK(exact.total.tp <= std::min(pred.size(), gold.size()));
      CHECK(partial.total.tp <= std::min(pred.size(), gold.size()));
    }
    // type counts never exceed token counts
    auto tokens = evaluate_tokens(corpus, pred, gold, MatchMode::exact);
    auto types = evaluate_types(corpus, pred, gold, MatchMode::exact);
    CHECK(types.total.tp + types.total.fn <= tokens.total.tp + tokens.total.fn);
    CHECK(types.total.tp + types.total.fp <= tokens.total.tp + tokens.total.fp);
  }
}
