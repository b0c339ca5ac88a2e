#include "revmine/aspect_xml.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "revmine/corpus.hpp"
#include "revmine/errors.hpp"
#include "support/builders.hpp"

using namespace revmine;
using revmine::testing::TempDir;

namespace {

std::string write_file(TempDir& dir, const std::string& name, const std::string& content) {
  const std::string path = dir.file(name);
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::vector<std::string> tokens_of(const Review& review) {
  std::vector<std::string> words;
  for (const Token& token : review.sentences[0].tokens) words.push_back(token.text);
  return words;
}

}  // namespace

TEST_CASE("aspect xml files become one-sentence gold-annotated reviews") {
  TempDir dir;
  const std::string path = write_file(dir, "laptops.xml", R"(<?xml version="1.0"?>
<sentences>
  <sentence id="11">
    <text>The battery life is great</text>
    <aspectTerms>
      <aspectTerm term="battery life" polarity="positive" from="4" to="16"/>
    </aspectTerms>
  </sentence>
  <sentence id="12">
    <text>Nothing to report</text>
  </sentence>
</sentences>
)");

  const Corpus corpus = load_aspect_xml(path, "laptop", "Laptops");
  REQUIRE(corpus.reviews.size() == 2);

  const Review& first = corpus.reviews[0];
  CHECK(first.id == "11");
  CHECK(first.app == "laptop");
  CHECK(first.category == "Laptops");
  CHECK(first.rating == 3);
  REQUIRE(first.sentences.size() == 1);
  CHECK(tokens_of(first) ==
        std::vector<std::string>{"The", "battery", "life", "is", "great"});

  REQUIRE(corpus.annotations.size() == 1);
  const AnnotationSpan& span = corpus.annotations[0];
  CHECK(span.annotator == "gold");
  CHECK(span.review_id == "11");
  CHECK(span.sentence_index == 0);
  CHECK(span.start == 1);
  CHECK(span.end == 3);
  CHECK(span_text(corpus, span) == "battery life");

  CHECK(corpus.reviews[1].id == "12");
  CHECK(corpus.metadata.at("language") == "english");
  CHECK(corpus.metadata.at("source") == path);
}

TEST_CASE("tokenization splits punctuation and keeps non-ascii letters") {
  TempDir dir;
  const std::string path = write_file(dir, "p.xml", R"(
<sentence id="1">
  <text>It's a caf&#233; app, honestly!</text>
  <aspectTerm term="caf&#233; app" from="7" to="16"/>
</sentence>
)");

  const Corpus corpus = load_aspect_xml(path, "a", "C");
  REQUIRE(corpus.reviews.size() == 1);
  CHECK(tokens_of(corpus.reviews[0]) ==
        std::vector<std::string>{"It", "'", "s", "a",
                                 "caf\xc3\xa9", "app", ",", "honestly", "!"});
  // The decoded text offsets 7..16 cover the two-byte e-acute.
  REQUIRE(corpus.annotations.size() == 1);
  CHECK(corpus.annotations[0].start == 4);
  CHECK(corpus.annotations[0].end == 6);
}

TEST_CASE("entities decode in text and attributes alike") {
  TempDir dir;
  const std::string path = write_file(dir, "e.xml", R"(
<sentence id="1">
  <text>Audio &amp; &quot;video&quot; sync &lt;ok&gt;</text>
  <aspectTerm term="&quot;video&quot; sync" from="8" to="20"/>
</sentence>
)");

  const Corpus corpus = load_aspect_xml(path, "a", "C");
  CHECK(tokens_of(corpus.reviews[0]) ==
        std::vector<std::string>{"Audio", "&", "\"", "video", "\"", "sync", "<", "ok", ">"});
  REQUIRE(corpus.annotations.size() == 1);
  CHECK(corpus.annotations[0].start == 2);  // opening quote token
  CHECK(corpus.annotations[0].end == 6);    // past "sync"
}

TEST_CASE("spans off token boundaries are dropped, aligned ones kept") {
  TempDir dir;
  const std::string path = write_file(dir, "m.xml", R"(
<sentence id="1">
  <text>The screen flickers</text>
  <aspectTerm term="creen" from="5" to="10"/>
  <aspectTerm term="screen" from="4" to="10"/>
  <aspectTerm term="screen" from="4" to="10"/>
</sentence>
)");

  const Corpus corpus = load_aspect_xml(path, "a", "C");
  // The mid-token span is dropped; the duplicate collapses to one.
  REQUIRE(corpus.annotations.size() == 1);
  CHECK(corpus.annotations[0].start == 1);
  CHECK(corpus.annotations[0].end == 2);
}

TEST_CASE("sentences without usable tokens are skipped") {
  TempDir dir;
  const std::string path = write_file(dir, "w.xml", R"(
<sentence id="1">
  <text>   </text>
</sentence>
<sentence id="2">
  <text>fine</text>
</sentence>
)");

  const Corpus corpus = load_aspect_xml(path, "a", "C");
  REQUIRE(corpus.reviews.size() == 1);
  CHECK(corpus.reviews[0].id == "2");
}

TEST_CASE("structural problems raise parse errors") {
  TempDir dir;

  CHECK_THROWS_AS(load_aspect_xml((dir.path() / "absent.xml").string(), "a", "C"), IoError);

  const std::string no_id = write_file(dir, "no_id.xml",
                                       "<sentence foo=\"1\">\n<text>hi</text>\n</sentence>\n");
  CHECK_THROWS_AS(load_aspect_xml(no_id, "a", "C"), ParseError);

  const std::string no_text =
      write_file(dir, "no_text.xml", "<sentence id=\"1\">\n</sentence>\n");
  CHECK_THROWS_AS(load_aspect_xml(no_text, "a", "C"), ParseError);

  const std::string unterminated =
      write_file(dir, "open.xml", "<sentence id=\"1\">\n<text>hi</text>\n");
  CHECK_THROWS_AS(load_aspect_xml(unterminated, "a", "C"), ParseError);

  const std::string no_from = write_file(
      dir, "no_from.xml",
      "<sentence id=\"1\">\n<text>hi there</text>\n<aspectTerm term=\"hi\" to=\"2\"/>\n"
      "</sentence>\n");
  CHECK_THROWS_AS(load_aspect_xml(no_from, "a", "C"), ParseError);

  const std::string bad_offset = write_file(
      dir, "bad_offset.xml",
      "<sentence id=\"1\">\n<text>hi there</text>\n"
      "<aspectTerm term=\"hi\" from=\"x\" to=\"2\"/>\n</sentence>\n");
  try {
    load_aspect_xml(bad_offset, "a", "C");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);  // reported at the opening <sentence> tag
  }

  const std::string duplicate_id = write_file(
      dir, "dup.xml",
      "<sentence id=\"1\">\n<text>hi</text>\n</sentence>\n"
      "<sentence id=\"1\">\n<text>ho</text>\n</sentence>\n");
  CHECK_THROWS_AS(load_aspect_xml(duplicate_id, "a", "C"), DataError);
}

TEST_CASE("an empty sentence list yields an empty corpus") {
  TempDir dir;
  const std::string path = write_file(dir, "empty.xml", "<sentences>\n</sentences>\n");
  const Corpus corpus = load_aspect_xml(path, "a", "C");
  CHECK(corpus.reviews.empty());
  CHECK(corpus.annotations.empty());
}
