#include <doctest.h>

#include <algorithm>
#include <random>

#include "layerstack/corpus.hpp"
#include "layerstack/error.hpp"
#include "test_util.hpp"

using namespace layerstack;

TEST_CASE("tokenize lowercases and splits on punctuation") {
    const TokenizePolicy none;
    CHECK(tokenize("AI, ai Ai!", none) == std::vector<std::string>{"ai", "ai", "ai"});
    CHECK(tokenize("", none).empty());
    CHECK(tokenize("state-of-the-art", none) ==
          std::vector<std::string>{"state", "of", "the", "art"});
}

TEST_CASE("tokenize drops numbers and stop words") {
    TokenizePolicy policy;
    policy.stop_words = {"the"};
    CHECK(tokenize("model 2023 the", policy) == std::vector<std::string>{"model"});
    // Mixed alphanumerics are kept; only purely numeric tokens go.
    CHECK(tokenize("gpt4 3d 42", policy) == std::vector<std::string>{"gpt4", "3d"});
}

TEST_CASE("tokenize treats non-ASCII bytes as separators") {
    CHECK(tokenize("caf\xC3\xA9 na\xC3\xAFve", TokenizePolicy{}) ==
          std::vector<std::string>{"caf", "na", "ve"});
}

TEST_CASE("tokenize is idempotent over its own output") {
    std::mt19937_64 rng(3);
    const std::string alphabet = "abcXYZ019 ,.;-!\t\n'";
    const auto policy = TokenizePolicy::english();
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const std::size_t len = rng() % 80;
        for (std::size_t i = 0; i < len; ++i)
            text += alphabet[rng() % alphabet.size()];
        const auto once = tokenize(text, policy);
        std::string joined;
        for (const auto& t : once)
            joined += t + " ";
        CHECK(tokenize(joined, policy) == once);
    }
}

TEST_CASE("term_frequencies counts every token") {
    CHECK(term_frequencies({"ai", "ai", "trust"}) == TermCounts{{"ai", 2}, {"trust", 1}});
    CHECK(term_frequencies({}).empty());
    CHECK(term_frequencies(std::vector<std::string>(1000, "x")) == TermCounts{{"x", 1000}});
}

TEST_CASE("default stop-word list") {
    const auto& words = default_stop_words();
    CHECK(words.size() > 150);
    CHECK(words.size() < 200);
    CHECK(words.contains("the"));
    CHECK_FALSE(words.contains("trust"));
}

TEST_CASE("documents keep total equal to count sum") {
    const auto doc = Document::from_text("d", "D", "Trust, trust and AI models; 1999 models.",
                                         TokenizePolicy::english());
    CHECK(doc.total_tokens == 5);
    CHECK(doc.token_counts.at("trust") == 2);
    CHECK(doc.token_counts.at("models") == 2);
    CHECK_FALSE(doc.token_counts.contains("and"));
}

TEST_CASE("top_k_terms ranks by count then term") {
    const auto doc = Document::from_counts("d", "d", {{"ai", 5}, {"trust", 3}, {"data", 3}});
    const auto top = top_k_terms(doc, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].term == "ai");
    CHECK(top[1].term == "data");
    CHECK(top[1].count == 3);

    const auto all = top_k_terms(doc, 50);
    REQUIRE(all.size() == 3);
    CHECK(all[2].term == "trust");

    const auto single = top_k_terms(Document::from_counts("s", "s", {{"a", 1}}), 10);
    REQUIRE(single.size() == 1);
    CHECK(single[0].term == "a");

    CHECK_THROWS_AS(top_k_terms(doc, 0), Error);
}

TEST_CASE("top_k_terms output is sorted for random tables") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        TermCounts counts;
        for (int i = 0; i < 30; ++i)
            counts["t" + std::to_string(rng() % 40)] += 1 + rng() % 4;
        const auto top = top_k_terms(counts, 1 + rng() % 20);
        for (std::size_t i = 1; i < top.size(); ++i) {
            CHECK(top[i - 1].count >= top[i].count);
            if (top[i - 1].count == top[i].count)
                CHECK(top[i - 1].term < top[i].term);
        }
    }
}

TEST_CASE("frequency_scatter deviation") {
    // doc: a = 0.1, b = 0.01 of 100 tokens; reference: a = 0.01, b = 0.01.
    const auto doc = Document::from_counts("d", "d", {{"a", 10}, {"b", 1}, {"z", 89}});
    const TermCounts reference{{"a", 1}, {"b", 1}, {"y", 98}};
    const auto points = frequency_scatter(doc, reference);
    REQUIRE(points.size() == 2);
    CHECK(points[0].term == "a");
    CHECK(points[0].doc_proportion == doctest::Approx(0.1));
    CHECK(points[0].deviation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(points[1].term == "b");
    CHECK(points[1].deviation == 0.0);
}

TEST_CASE("frequency_scatter sign matches proportion difference") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        TermCounts a, b;
        for (int i = 0; i < 20; ++i) {
            a["t" + std::to_string(rng() % 15)] += 1 + rng() % 5;
            b["t" + std::to_string(rng() % 15)] += 1 + rng() % 5;
        }
        const auto doc = Document::from_counts("d", "d", a);
        for (const auto& p : frequency_scatter(doc, b)) {
            const double diff = p.doc_proportion - p.reference_proportion;
            CHECK((diff > 0) == (p.deviation > 0));
            CHECK((diff < 0) == (p.deviation < 0));
        }
    }
}

TEST_CASE("frequency_scatter with no shared terms is empty") {
    const auto doc = Document::from_counts("d", "d", {{"a", 1}});
    CHECK(frequency_scatter(doc, {{"b", 3}}).empty());
}

TEST_CASE("corpus rejects duplicate ids and sorts") {
    std::vector<Document> docs{Document::from_counts("b", "b", {{"x", 1}}),
                               Document::from_counts("a", "a", {{"y", 1}})};
    const Corpus corpus(docs, {});
    CHECK(corpus.documents()[0].id == "a");
    CHECK(corpus.vocabulary() == std::set<std::string>{"x", "y"});
    CHECK(corpus.leave_one_out(0) == TermCounts{{"x", 1}});
    docs.push_back(Document::from_counts("a", "again", {{"z", 1}}));
    CHECK_THROWS_AS(Corpus(docs, {}), Error);
}

TEST_CASE("ingest_corpus reads a directory in id order") {
    TempDir dir;
    dir.write("b.txt", "Beta text about trust.");
    dir.write("a.txt", "Alpha text about AI.");
    dir.write("notes.md", "ignored");
    const auto corpus = ingest_corpus(dir.path(), TokenizePolicy::english());
    REQUIRE(corpus.size() == 2);
    CHECK(corpus.documents()[0].id == "a");
    CHECK(corpus.documents()[1].id == "b");
    CHECK(corpus.documents()[0].title == "a");
}

TEST_CASE("ingest_corpus reads a manifest with titles") {
    TempDir dir;
    dir.write("docs/one.txt", "one words");
    dir.write("docs/two.txt", "two words");
    dir.write("docs/three.txt", "three words");
    const auto manifest = dir.write("manifest.jsonl",
                                    "{\"id\":\"p3\",\"title\":\"Third Paper\",\"path\":\"docs/three.txt\"}\n"
                                    "{\"id\":\"p1\",\"title\":\"First Paper\",\"path\":\"docs/one.txt\"}\n"
                                    "\n"
                                    "{\"id\":\"p2\",\"title\":\"Second Paper\",\"path\":\"docs/two.txt\"}\n");
    const auto corpus = ingest_corpus(manifest, TokenizePolicy::english());
    REQUIRE(corpus.size() == 3);
    CHECK(corpus.documents()[0].title == "First Paper");
    CHECK(corpus.documents()[1].title == "Second Paper");
    CHECK(corpus.documents()[2].title == "Third Paper");
    CHECK(corpus.documents()[2].token_counts.at("three") == 1);
}

TEST_CASE("ingest_corpus errors") {
    TempDir dir;
    CHECK_THROWS_WITH_AS(ingest_corpus(dir.path(), TokenizePolicy::english()), "empty corpus", Error);
    CHECK_THROWS_AS(ingest_corpus(dir.path() / "missing", TokenizePolicy::english()), Error);

    dir.write("bad.txt", std::string("ok \xFF\xFE bytes"));
    try {
        ingest_corpus(dir.path(), TokenizePolicy::english());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
        CHECK(std::string(e.what()).find("UTF-8") != std::string::npos);
    }

    const auto manifest = dir.write("m.jsonl", "{\"id\":\"x\",\"path\":\"nowhere.txt\"}\n");
    try {
        ingest_corpus(manifest, TokenizePolicy::english());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("nowhere.txt") != std::string::npos);
    }
}

TEST_CASE("ingest_corpus is deterministic") {
    TempDir dir;
    for (int i = 0; i < 8; ++i)
        dir.write("d" + std::to_string(7 - i) + ".txt", "words " + std::to_string(i) + " shared term" +
                                                            std::string(i, 'x'));
    const auto a = ingest_corpus(dir.path(), TokenizePolicy::english());
    const auto b = ingest_corpus(dir.path(), TokenizePolicy::english());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.documents()[i].id == b.documents()[i].id);
        CHECK(a.documents()[i].token_counts == b.documents()[i].token_counts);
    }
}

TEST_CASE("stop-word override file") {
    TempDir dir;
    const auto path = dir.write("stop.txt", "# custom list\nModel\n\nthe\r\n");
    const auto policy = TokenizePolicy::from_file(path);
    CHECK(policy.stop_words == std::set<std::string>{"model", "the"});
    CHECK(tokenize("The model and data", policy) == std::vector<std::string>{"and", "data"});
}

TEST_CASE("utf8 validation") {
    CHECK(is_valid_utf8("plain"));
    CHECK(is_valid_utf8("caf\xC3\xA9 \xE2\x82\xAC \xF0\x9F\x98\x80"));
    CHECK_FALSE(is_valid_utf8("\xC0\xAF"));      // overlong
    CHECK_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
    CHECK_FALSE(is_valid_utf8("\xE2\x82"));      // truncated
    CHECK_FALSE(is_valid_utf8("\x80"));
}
