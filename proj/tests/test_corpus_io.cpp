#include <doctest.h>

#include <fstream>

#include "lexcase/corpus_io.hpp"
#include "lexcase/error.hpp"
#include "support.hpp"

using namespace lexcase;
using support::error_of;
using support::TempDir;

namespace {

void put(const std::filesystem::path& p, const std::string& text) { corpus::write_text_file(p, text); }

void make_query(const std::filesystem::path& dir, int candidates, const std::string& gold = "") {
  put(dir / "base.txt", "base of " + dir.filename().string());
  for (int i = candidates; i >= 1; --i) put(dir / "candidates" / (std::to_string(i) + ".txt"), "cand " + std::to_string(i));
  if (!gold.empty()) put(dir / "gold.json", gold);
}

}  // namespace

TEST_CASE("load_case_queries reads one QueryCase per directory, sorted") {
  TempDir tmp("cases");
  make_query(tmp / "q2", 3, R"(["1","3"])");
  make_query(tmp / "q1", 3);
  const auto qs = corpus::load_case_queries(tmp.path());
  REQUIRE(qs.size() == 2);
  CHECK(qs[0].id == "q1");
  CHECK(qs[1].id == "q2");
  for (const auto& q : qs) {
    REQUIRE(q.candidates.size() == 3);
    CHECK(q.candidates[0].id == "1");
    CHECK(q.candidates[2].id == "3");
    CHECK(q.base.tokens.empty());
  }
  CHECK_FALSE(qs[0].gold.has_value());
  CHECK(qs[1].gold == std::set<DocId>{"1", "3"});
  CHECK(qs[1].base.text == "base of q2");
  CHECK(qs[1].candidates[1].text == "cand 2");
}

TEST_CASE("load_case_queries errors") {
  TempDir tmp("case-errors");
  SUBCASE("missing base.txt") {
    put(tmp / "q1" / "candidates" / "1.txt", "x");
    CHECK(error_of([&] { corpus::load_case_queries(tmp.path()); }) == ErrorCode::malformed_query);
  }
  SUBCASE("gold id not among candidates") {
    make_query(tmp / "q1", 3, R"(["999"])");
    CHECK(error_of([&] { corpus::load_case_queries(tmp.path()); }) == ErrorCode::gold_mismatch);
  }
  SUBCASE("gold.json that is not an array") {
    make_query(tmp / "q1", 3, R"({"a":1})");
    CHECK(error_of([&] { corpus::load_case_queries(tmp.path()); }) == ErrorCode::parse);
  }
  SUBCASE("invalid UTF-8 is a hard error") {
    make_query(tmp / "q1", 1);
    put(tmp / "q1" / "base.txt", std::string("bad \xff byte"));
    CHECK(error_of([&] { corpus::load_case_queries(tmp.path()); }) == ErrorCode::encoding);
  }
  SUBCASE("missing root") {
    CHECK(error_of([&] { corpus::load_case_queries(tmp / "nope"); }) == ErrorCode::io);
  }
}

TEST_CASE("load_articles") {
  TempDir tmp("articles");
  SUBCASE("1044-line file gives 1044 documents in file order") {
    std::string text;
    for (int i = 1044; i >= 1; --i) text += R"({"id":"art)" + std::to_string(i) + R"(","text":"Article )" + std::to_string(i) + "\"}\n";
    put(tmp / "a.jsonl", text);
    const auto docs = corpus::load_articles(tmp / "a.jsonl");
    REQUIRE(docs.size() == 1044);
    CHECK(docs.front().id == "art1044");
    CHECK(docs.back().id == "art1");
    CHECK(docs.back().text == "Article 1");
  }
  SUBCASE("empty file") {
    put(tmp / "a.jsonl", "");
    CHECK(corpus::load_articles(tmp / "a.jsonl").empty());
  }
  SUBCASE("line missing text names the line") {
    put(tmp / "a.jsonl", "{\"id\":\"1\",\"text\":\"x\"}\n{\"id\":\"2\"}\n");
    try {
      corpus::load_articles(tmp / "a.jsonl");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON") {
    put(tmp / "a.jsonl", "{\"id\":\"1\",\n");
    CHECK(error_of([&] { corpus::load_articles(tmp / "a.jsonl"); }) == ErrorCode::parse);
  }
  SUBCASE("duplicate id") {
    put(tmp / "a.jsonl", "{\"id\":\"1\",\"text\":\"x\"}\n{\"id\":\"1\",\"text\":\"y\"}\n");
    CHECK(error_of([&] { corpus::load_articles(tmp / "a.jsonl"); }) == ErrorCode::duplicate_id);
  }
}

TEST_CASE("load_pairs") {
  TempDir tmp("pairs");
  SUBCASE("724 pairs with 353 Yes") {
    std::string xml = "<?xml version=\"1.0\"?>\n<dataset>\n";
    for (int i = 0; i < 724; ++i) {
      xml += "<pair id=\"H" + std::to_string(i) + "\" label=\"" + (i < 353 ? "Y" : "N") + "\"><t1>Article " +
             std::to_string(i) + " applies.</t1><t2>Query &amp; text " + std::to_string(i) + "</t2></pair>\n";
    }
    xml += "</dataset>\n";
    put(tmp / "p.xml", xml);
    const auto pairs = corpus::load_pairs(tmp / "p.xml");
    REQUIRE(pairs.size() == 724);
    CHECK(std::count_if(pairs.begin(), pairs.end(), [](const EntailPair& p) { return p.label == true; }) == 353);
    CHECK(std::all_of(pairs.begin(), pairs.end(), [](const EntailPair& p) { return p.label.has_value(); }));
    const auto it = std::find_if(pairs.begin(), pairs.end(), [](const EntailPair& p) { return p.id == "H7"; });
    REQUIRE(it != pairs.end());
    CHECK(it->t2.text == "Query & text 7");
  }
  SUBCASE("pair without label") {
    put(tmp / "p.xml", "<pairs><pair id=\"a\"><t1>x</t1><t2>y</t2></pair></pairs>");
    const auto pairs = corpus::load_pairs(tmp / "p.xml");
    REQUIRE(pairs.size() == 1);
    CHECK_FALSE(pairs[0].label.has_value());
    CHECK(pairs[0].t1.text == "x");
  }
  SUBCASE("label M") {
    put(tmp / "p.xml", "<pairs><pair id=\"a\" label=\"M\"><t1>x</t1><t2>y</t2></pair></pairs>");
    CHECK(error_of([&] { corpus::load_pairs(tmp / "p.xml"); }) == ErrorCode::invalid_label);
  }
  SUBCASE("missing t2") {
    put(tmp / "p.xml", "<pairs><pair id=\"a\" label=\"Y\"><t1>x</t1></pair></pairs>");
    CHECK(error_of([&] { corpus::load_pairs(tmp / "p.xml"); }) == ErrorCode::parse);
  }
  SUBCASE("missing id") {
    put(tmp / "p.xml", "<pairs><pair label=\"Y\"><t1>x</t1><t2>y</t2></pair></pairs>");
    CHECK(error_of([&] { corpus::load_pairs(tmp / "p.xml"); }) == ErrorCode::parse);
  }
  SUBCASE("duplicate id") {
    put(tmp / "p.xml", "<pairs><pair id=\"a\"><t1>x</t1><t2>y</t2></pair><pair id=\"a\"><t1>x</t1><t2>y</t2></pair></pairs>");
    CHECK(error_of([&] { corpus::load_pairs(tmp / "p.xml"); }) == ErrorCode::duplicate_id);
  }
  SUBCASE("broken XML") {
    put(tmp / "p.xml", "<pairs><pair id=\"a\">");
    CHECK(error_of([&] { corpus::load_pairs(tmp / "p.xml"); }) == ErrorCode::parse);
  }
}

TEST_CASE("write then load round-trips every collection") {
  TempDir tmp("roundtrip");
  std::vector<QueryCase> qs(2);
  qs[0].id = "q1";
  qs[0].base = {"q1", "Base text with ünïcödé\nand two lines.", {}};
  qs[0].candidates = {{"c1", "first", {}}, {"c2", "  second  \n", {}}};
  qs[0].gold = std::set<DocId>{"c2"};
  qs[1].id = "q2";
  qs[1].base = {"q2", "", {}};
  qs[1].candidates = {{"c9", "x", {}}};
  corpus::write_case_queries(tmp / "cases", qs);
  CHECK(corpus::load_case_queries(tmp / "cases") == qs);
  CHECK(corpus::load_gold(tmp / "cases") == std::map<DocId, std::set<DocId>>{{"q1", {"c2"}}});

  const std::vector<Document> arts = {{"b", "line \"quoted\"\ttab", {}}, {"a", "plain", {}}};
  corpus::write_articles(tmp / "a.jsonl", arts);
  CHECK(corpus::load_articles(tmp / "a.jsonl") == arts);

  std::vector<EntailPair> pairs = {{"p1", {"p1/t1", "A <b> & c", {}}, {"p1/t2", "d", {}}, true},
                                   {"p2", {"p2/t1", "e", {}}, {"p2/t2", "f", {}}, std::nullopt},
                                   {"p3", {"p3/t1", "g", {}}, {"p3/t2", "h", {}}, false}};
  corpus::write_pairs(tmp / "p.xml", pairs);
  CHECK(corpus::load_pairs(tmp / "p.xml") == pairs);
}
