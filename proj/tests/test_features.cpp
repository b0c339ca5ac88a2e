#include "revmine/features.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "revmine/errors.hpp"
#include "revmine/rng.hpp"
#include "support/builders.hpp"

using namespace revmine;
using revmine::testing::TempDir;
using revmine::testing::make_review;

namespace {

Sentence sentence_of(const std::vector<std::string>& words,
                     const std::vector<std::string>& pos = {}) {
  return make_review("r", "app", "Cat", 3, {words}, {pos}).sentences[0];
}

bool has(const FeatureVector& fv, const std::string& id) {
  return std::find(fv.binary.begin(), fv.binary.end(), id) != fv.binary.end();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("single capitalized token emits the documented template ids") {
  FeatureTemplateConfig config;
  FeatureVector fv = extract_features(sentence_of({"Great"}), 0, config);
  CHECK(has(fv, "w[0]=great"));
  CHECK(has(fv, "pre1[0]=g"));
  CHECK(has(fv, "suf1[0]=t"));
  CHECK(has(fv, "pos_in_sent=first"));
  CHECK(has(fv, "style[0]=init_cap"));
  CHECK(has(fv, "w[-1]=<PAD>"));
  CHECK(has(fv, "w[-2]=<PAD>"));
  CHECK(has(fv, "w[+1]=<PAD>"));
  CHECK(has(fv, "w[+2]=<PAD>"));
  CHECK(fv.continuous.empty());
}

TEST_CASE("affix lengths clamp to the word length") {
  FeatureTemplateConfig config;
  FeatureVector fv = extract_features(sentence_of({"a"}), 0, config);
  CHECK(has(fv, "pre1[0]=a"));
  CHECK(has(fv, "suf1[0]=a"));
  for (const std::string& id : fv.binary) {
    CHECK(id.find("pre2") == std::string::npos);
    CHECK(id.find("pre3") == std::string::npos);
    CHECK(id.find("pre4") == std::string::npos);
    CHECK(id.find("suf2") == std::string::npos);
  }

  FeatureVector four = extract_features(sentence_of({"sync"}), 0, config);
  CHECK(has(four, "pre4[0]=sync"));
  CHECK(has(four, "suf4[0]=sync"));
  CHECK(has(four, "pre3[0]=syn"));
  CHECK(has(four, "suf3[0]=ync"));
}

TEST_CASE("affixes count UTF-8 code points, not bytes") {
  FeatureTemplateConfig config;
  FeatureVector fv = extract_features(sentence_of({"caf\xc3\xa9"}), 0, config);
  CHECK(has(fv, "pre1[0]=c"));
  CHECK(has(fv, "suf1[0]=\xc3\xa9"));
  CHECK(has(fv, "pre2[0]=ca"));
  CHECK(has(fv, "suf2[0]=f\xc3\xa9"));
  CHECK(has(fv, "pre4[0]=caf\xc3\xa9"));
  CHECK(has(fv, "suf4[0]=caf\xc3\xa9"));
}

TEST_CASE("window features cover both directions with signed offsets") {
  FeatureTemplateConfig config;
  Sentence s = sentence_of({"the", "app", "crashes", "on", "upload"},
                           {"DT", "NN", "VBZ", "IN", "NN"});
  FeatureVector fv = extract_features(s, 2, config);
  CHECK(has(fv, "w[-2]=the"));
  CHECK(has(fv, "w[-1]=app"));
  CHECK(has(fv, "w[0]=crashes"));
  CHECK(has(fv, "w[+1]=on"));
  CHECK(has(fv, "w[+2]=upload"));
  CHECK(has(fv, "pos[-2]=DT"));
  CHECK(has(fv, "pos[-1]=NN"));
  CHECK(has(fv, "pos[0]=VBZ"));
  CHECK(has(fv, "pos[+1]=IN"));
  CHECK(has(fv, "pos[+2]=NN"));
  CHECK(has(fv, "pos_in_sent=inner"));

  FeatureVector last = extract_features(s, 4, config);
  CHECK(has(last, "pos_in_sent=last"));
  CHECK(has(last, "w[+1]=<PAD>"));
}

TEST_CASE("untagged tokens emit no pos features and use_pos off drops them all") {
  Sentence untagged = sentence_of({"upload", "works"});
  FeatureTemplateConfig config;
  FeatureVector fv = extract_features(untagged, 0, config);
  for (const std::string& id : fv.binary) CHECK(id.rfind("pos[", 0) != 0);

  FeatureTemplateConfig off;
  off.use_pos = false;
  FeatureVector fv2 =
      extract_features(sentence_of({"upload", "works"}, {"NN", "VBZ"}), 0, off);
  for (const std::string& id : fv2.binary) CHECK(id.rfind("pos[", 0) != 0);
}

TEST_CASE("stylistics flags can fire together") {
  FeatureTemplateConfig config;

  FeatureVector caps = extract_features(sentence_of({"HTC2"}), 0, config);
  CHECK(has(caps, "style[0]=init_cap"));
  CHECK(has(caps, "style[0]=all_caps"));
  CHECK(has(caps, "style[0]=has_digit"));
  CHECK(has(caps, "style[0]=alnum"));
  CHECK(!has(caps, "style[0]=has_symbol"));

  FeatureVector dashed = extract_features(sentence_of({"x-ray"}), 0, config);
  CHECK(has(dashed, "style[0]=has_symbol"));
  CHECK(!has(dashed, "style[0]=alnum"));
  CHECK(!has(dashed, "style[0]=init_cap"));
  CHECK(!has(dashed, "style[0]=all_caps"));

  FeatureVector plain = extract_features(sentence_of({"great"}), 0, config);
  CHECK(has(plain, "style[0]=alnum"));
  CHECK(!has(plain, "style[0]=init_cap"));
}

TEST_CASE("window zero and disabled templates shrink the vector") {
  FeatureTemplateConfig config;
  config.window = 0;
  config.use_pos = false;
  config.use_position = false;
  config.use_stylistics = false;
  config.affix_lengths.clear();
  FeatureVector fv = extract_features(sentence_of({"upload", "works"}), 0, config);
  CHECK(fv.binary == std::vector<std::string>{"w[0]=upload"});
}

TEST_CASE("binary feature ids never repeat") {
  std::mt19937 rng = make_rng(7);
  FeatureTemplateConfig config;
  for (int round = 0; round < 50; ++round) {
    Corpus corpus = testing::random_corpus(
        rng, {.n_reviews_max = 3, .unicode_tokens = true, .with_pos = true});
    for (const Review& review : corpus.reviews) {
      for (const Sentence& sentence : review.sentences) {
        for (int t = 0; t < static_cast<int>(sentence.tokens.size()); ++t) {
          FeatureVector fv = extract_features(sentence, t, config);
          std::set<std::string> unique(fv.binary.begin(), fv.binary.end());
          CHECK(unique.size() == fv.binary.size());
        }
      }
    }
  }
}

TEST_CASE("embedding features attach to the current token only, zero for OOV") {
  EmbeddingTable table;
  table.dim = 3;
  table.vectors["upload"] = {0.5, -1.0, 2.0};
  table.vectors["works"] = {1.0, 1.0, 1.0};

  FeatureTemplateConfig config;
  config.use_embeddings = true;
  config.embedding_dim = 3;

  Sentence s = sentence_of({"Upload", "mysteryword"});
  FeatureVector fv = extract_features(s, 0, config, &table);
  REQUIRE(fv.continuous.size() == 3);
  CHECK(fv.continuous[0] == std::pair<std::string, double>{"emb[0]", 0.5});
  CHECK(fv.continuous[1] == std::pair<std::string, double>{"emb[1]", -1.0});
  CHECK(fv.continuous[2] == std::pair<std::string, double>{"emb[2]", 2.0});

  FeatureVector oov = extract_features(s, 1, config, &table);
  REQUIRE(oov.continuous.size() == 3);
  for (const auto& [id, value] : oov.continuous) CHECK(value == 0.0);

  FeatureVector off = extract_features(s, 0, config, nullptr);
  CHECK(off.continuous.empty());
}

TEST_CASE("embedding lookup honors lowercase_lookup") {
  EmbeddingTable table;
  table.dim = 1;
  table.vectors["upload"] = {4.0};
  CHECK(table.lookup("UPLOAD") != nullptr);
  table.lowercase_lookup = false;
  CHECK(table.lookup("UPLOAD") == nullptr);
  CHECK(table.lookup("upload") != nullptr);
}

TEST_CASE("load_embeddings reads plain and headered files") {
  TempDir dir;
  const std::string plain = dir.file("plain.txt");
  write_file(plain, "upload 0.5 -1 2\nworks 1 1 1\n");
  EmbeddingTable a = load_embeddings(plain);
  CHECK(a.dim == 3);
  CHECK(a.vectors.size() == 2);
  CHECK(a.vectors.at("upload") == std::vector<double>{0.5, -1.0, 2.0});

  const std::string headered = dir.file("headered.txt");
  write_file(headered, "2 3\nupload 0.5 -1 2\nworks 1 1 1\n");
  EmbeddingTable b = load_embeddings(headered);
  CHECK(b.dim == 3);
  CHECK(b.vectors == a.vectors);
}

TEST_CASE("load_embeddings rejects ragged or non-numeric lines") {
  TempDir dir;
  const std::string ragged = dir.file("ragged.txt");
  write_file(ragged, "upload 0.5 -1 2\nworks 1 1\n");
  CHECK_THROWS_AS(load_embeddings(ragged), ParseError);

  const std::string alpha = dir.file("alpha.txt");
  write_file(alpha, "upload 0.5 oops 2\n");
  CHECK_THROWS_AS(load_embeddings(alpha), ParseError);

  CHECK_THROWS_AS(load_embeddings(dir.file("missing.txt")), IoError);
}

TEST_CASE("load_embeddings keeps the last vector for a repeated word") {
  TempDir dir;
  const std::string path = dir.file("dup.txt");
  write_file(path, "upload 1 1\nupload 2 2\n");
  EmbeddingTable table = load_embeddings(path);
  CHECK(table.vectors.size() == 1);
  CHECK(table.vectors.at("upload") == std::vector<double>{2.0, 2.0});
}

TEST_CASE("a one-token sentence counts as first, not last") {
  FeatureTemplateConfig config;
  FeatureVector fv = extract_features(sentence_of({"ok"}), 0, config);
  CHECK(has(fv, "pos_in_sent=first"));
  CHECK(!has(fv, "pos_in_sent=last"));
}
