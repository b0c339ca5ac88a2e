// Regenerates the checked-in corpora under data/fixtures. Everything here is
// hand-specified or derived deterministically, so reruns are byte-identical;
// the committed files are the reference copies that tests compare against.
//
// Usage: make_fixtures <output-dir>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"
#include "revmine/corpus_io.hpp"
#include "revmine/guidelines.hpp"

namespace {

using namespace revmine;

Sentence sentence(int index, const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  s.sentence_index = index;
  for (const auto& [text, pos] : words) {
    s.tokens.push_back({text, pos, static_cast<int>(s.tokens.size())});
  }
  return s;
}

std::string review_id(const std::string& category, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "-%03d", n);
  std::string id = category + buf;
  for (char& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return id;
}

// Six reviews across two categories, annotated by two people who agree on
// three of anna's five spans (ben marks four): dice = 2*3 / (5+4) = 0.667.
Corpus make_mini() {
  Corpus c;
  auto add = [&](const std::string& app, const std::string& category, int rating,
                 std::vector<Sentence> sentences) {
    Review r;
    r.id = review_id(category, static_cast<int>(c.reviews.size()) + 1);
    r.app = app;
    r.category = category;
    r.rating = rating;
    r.sentences = std::move(sentences);
    c.reviews.push_back(std::move(r));
    return c.reviews.back().id;
  };
  auto span = [&](const std::string& who, const std::string& id, int s, int b, int e) {
    c.annotations.push_back({who, id, s, b, e});
  };

  std::string id;
  id = add("pagely", "Books", 5,
           {sentence(0, {{"the", "DT"},
                         {"search", "NN"},
                         {"function", "NN"},
                         {"is", "VBZ"},
                         {"great", "JJ"}})});
  span("anna", id, 0, 1, 3);
  span("ben", id, 0, 1, 3);

  id = add("pagely", "Books", 4,
           {sentence(0, {{"i", "PRP"},
                         {"love", "VBP"},
                         {"the", "DT"},
                         {"night", "NN"},
                         {"mode", "NN"}})});
  span("anna", id, 0, 3, 5);
  span("ben", id, 0, 4, 5);

  add("pagely", "Books", 3,
      {sentence(0, {{"works", "VBZ"}, {"fine", "RB"}, {"today", "NN"}})});

  id = add("pixelquest", "Games", 2,
           {sentence(0, {{"the", "DT"},
                         {"level", "NN"},
                         {"editor", "NN"},
                         {"rocks", "VBZ"}})});
  span("anna", id, 0, 1, 3);
  span("ben", id, 0, 1, 3);

  id = add("pixelquest", "Games", 1,
           {sentence(0, {{"this", "DT"},
                         {"app", "NN"},
                         {"crashes", "VBZ"},
                         {"on", "IN"},
                         {"my", "PRP$"},
                         {"phone", "NN"}})});
  span("anna", id, 0, 1, 2);
  span("ben", id, 0, 1, 2);

  id = add("pixelquest", "Games", 4,
           {sentence(0, {{"loading", "VBG"},
                         {"is", "VBZ"},
                         {"really", "RB"},
                         {"slow", "JJ"}})});
  span("anna", id, 0, 2, 4);

  canonicalize(c);
  validate(c);
  return c;
}

// Twenty one-pattern reviews a tagger can fit exactly: even reviews carry a
// two-token "battery life" span, odd ones a one-token "camera" span, with a
// rotating filler so sentences are not literal duplicates.
Corpus make_overfit() {
  static const char* kFillers[] = {"really", "quite",  "very",  "super",  "pretty",
                                   "fairly", "rather", "truly", "awfully", "mighty"};
  Corpus c;
  for (int i = 0; i < 20; ++i) {
    Review r;
    r.id = review_id("Tools", i + 1);
    r.app = "phonepal";
    r.category = "Tools";
    r.rating = i % 5 + 1;
    const std::string filler = kFillers[i / 2];
    if (i % 2 == 0) {
      r.sentences = {sentence(0, {{"the", "DT"},
                                  {"battery", "NN"},
                                  {"life", "NN"},
                                  {"is", "VBZ"},
                                  {filler, "RB"},
                                  {"good", "JJ"}})};
      c.annotations.push_back({"gold", r.id, 0, 1, 3});
    } else {
      r.sentences = {sentence(0, {{"my", "PRP$"},
                                  {"camera", "NN"},
                                  {"works", "VBZ"},
                                  {filler, "RB"},
                                  {"well", "RB"}})};
      c.annotations.push_back({"gold", r.id, 0, 1, 2});
    }
    c.reviews.push_back(std::move(r));
  }
  canonicalize(c);
  validate(c);
  return c;
}

// Three categories times 24 reviews cycling through six recipes, one per
// guideline step plus two kinds of keepers:
//   i%6==0  no spans at all             (preprocess drops the review)
//           but wording that collides with annotated spans elsewhere, so
//           cross-category scores stay off the 0 and 100 rails
//   i%6==1  "app" and app-name spans    (self-reference step empties it)
//   i%6==2  an adverb+adjective span    (nounless step empties it)
//   i%6==3  a five-token span           (length cap 3 empties it)
//   i%6==4  a one-token noun span       (survives every step)
//   i%6==5  a two-token noun span       (survives caps of 2 and up)
// Span vocabulary mixes a shared bank with per-category words so folds that
// hold out a whole category still see familiar contexts. Each category also
// carries word-for-word identical "the sync is useful" reviews that are only
// sometimes annotated, at per-category ratios; no tagger can satisfy both
// copies, which pins cross-category scores strictly between 0 and 100 and
// spreads them across categories.
Corpus make_synthetic() {
  struct CategorySpec {
    std::string name;
    std::string apps[2];
    std::string words[4];
    int noisy_annotated;
    int noisy_plain;
  };
  static const CategorySpec kCategories[] = {
      {"Productivity", {"taskly", "notefox"}, {"note", "list", "reminder", "calendar"}, 2, 1},
      {"Games", {"pixelforge", "runquest"}, {"level", "score", "puzzle", "avatar"}, 3, 1},
      {"Social", {"chatta", "snapnest"}, {"feed", "chat", "profile", "photo"}, 2, 2},
  };
  static const std::string kShared[] = {"sync", "backup", "widget", "search"};

  Corpus c;
  for (const CategorySpec& cat : kCategories) {
    for (int i = 0; i < 24; ++i) {
      Review r;
      r.id = review_id(cat.name, i + 1);
      r.app = cat.apps[i % 2];
      r.category = cat.name;
      r.rating = i % 5 + 1;
      const int round = i / 6;
      switch (i % 6) {
        case 0:
          r.sentences = {sentence(0, {{"the", "DT"},
                                      {"widget", "NN"},
                                      {"is", "VBZ"},
                                      {"broken", "JJ"}})};
          break;
        case 1:
          r.sentences = {
              sentence(0, {{"this", "DT"}, {"app", "NN"}, {"rocks", "VBZ"}}),
              sentence(1, {{"i", "PRP"}, {"use", "VBP"}, {r.app, "NNP"}, {"daily", "RB"}})};
          c.annotations.push_back({"gold", r.id, 0, 1, 2});
          c.annotations.push_back({"gold", r.id, 1, 2, 3});
          break;
        case 2:
          r.sentences = {sentence(
              0, {{"it", "PRP"}, {"is", "VBZ"}, {"really", "RB"}, {"slow", "JJ"}})};
          c.annotations.push_back({"gold", r.id, 0, 2, 4});
          break;
        case 3:
          r.sentences = {sentence(0, {{"the", "DT"},
                                      {"auto", "JJ"},
                                      {"cloud", "NN"},
                                      {"backup", "NN"},
                                      {"sync", "NN"},
                                      {"tool", "NN"},
                                      {"helps", "VBZ"}})};
          c.annotations.push_back({"gold", r.id, 0, 1, 6});
          break;
        case 4: {
          const std::string& word = i < 12 ? kShared[round] : cat.words[round - 2];
          r.sentences = {sentence(
              0, {{"the", "DT"}, {word, "NN"}, {"is", "VBZ"}, {"useful", "JJ"}})};
          c.annotations.push_back({"gold", r.id, 0, 1, 2});
          break;
        }
        case 5:
          r.sentences = {sentence(0, {{"i", "PRP"},
                                      {"like", "VBP"},
                                      {"the", "DT"},
                                      {kShared[round], "NN"},
                                      {cat.words[round], "NN"}})};
          c.annotations.push_back({"gold", r.id, 0, 3, 5});
          break;
      }
      c.reviews.push_back(std::move(r));
    }
    for (int i = 0; i < cat.noisy_annotated + cat.noisy_plain; ++i) {
      Review r;
      r.id = review_id(cat.name, 25 + i);
      r.app = cat.apps[i % 2];
      r.category = cat.name;
      r.rating = i % 5 + 1;
      r.sentences = {sentence(
          0, {{"the", "DT"}, {"sync", "NN"}, {"is", "VBZ"}, {"useful", "JJ"}})};
      if (i < cat.noisy_annotated) {
        c.annotations.push_back({"gold", r.id, 0, 1, 2});
      } else {
        // An annotated second sentence keeps the review alive through every
        // length cap, so the unannotated copy above stays in play.
        r.sentences.push_back(sentence(
            1, {{"the", "DT"}, {"backup", "NN"}, {"is", "VBZ"}, {"useful", "JJ"}}));
        c.annotations.push_back({"gold", r.id, 1, 1, 2});
      }
      c.reviews.push_back(std::move(r));
    }
  }
  canonicalize(c);
  validate(c);
  return c;
}

void write_embeddings(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << "8 3\n"
      << "battery 0.10 0.20 0.30\n"
      << "camera 0.40 0.10 0.05\n"
      << "life 0.15 0.25 0.20\n"
      << "sync 0.05 0.45 0.10\n"
      << "backup 0.08 0.40 0.12\n"
      << "level 0.50 0.05 0.30\n"
      << "note 0.30 0.30 0.10\n"
      << "the 0.01 0.02 0.01\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  const Corpus mini = make_mini();
  const Corpus overfit = make_overfit();
  const Corpus synthetic = make_synthetic();
  save_corpus(mini, (dir / "mini.jsonl").string(), CorpusFormat::jsonl);
  save_corpus(overfit, (dir / "overfit.jsonl").string(), CorpusFormat::jsonl);
  save_corpus(synthetic, (dir / "synthetic.jsonl").string(), CorpusFormat::jsonl);

  PipelineConfig pipeline;
  pipeline.steps = {StepKind::preprocess, StepKind::self_refs, StepKind::nounless,
                    StepKind::length_cap};
  pipeline.max_len = 3;
  auto [golden, reports] = run_pipeline(synthetic, pipeline);
  save_corpus(golden, (dir / "golden_sim3.jsonl").string(), CorpusFormat::jsonl);

  write_embeddings((dir / "embeddings_tiny.txt").string());

  std::cout << "wrote mini (" << mini.reviews.size() << " reviews), overfit ("
            << overfit.reviews.size() << "), synthetic (" << synthetic.reviews.size()
            << "), golden (" << golden.reviews.size() << ")\n";
  return 0;
}
