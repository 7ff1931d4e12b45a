#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "expando/retrieval.hpp"
#include "expando/rng.hpp"
#include "support/oracles.hpp"

using namespace expando;

namespace {

const std::vector<Document> kThreeDocs = {
    Document{"d1", "a b"}, Document{"d2", "a a b"}, Document{"d3", "c"}};

std::vector<Document> random_corpus(SplitMix64& rng, std::size_t max_docs,
                                    std::size_t vocab) {
    std::size_t n = 1 + rng.next_u64() % max_docs;
    std::vector<Document> docs;
    for (std::size_t d = 0; d < n; ++d) {
        std::size_t len = rng.next_u64() % 15;
        std::string text;
        for (std::size_t i = 0; i < len; ++i) {
            if (i)
                text.push_back(' ');
            text += "t" + std::to_string(rng.next_u64() % vocab);
        }
        docs.push_back(Document{"d" + std::to_string(d), text});
    }
    return docs;
}

QueryRep random_query(SplitMix64& rng, std::size_t vocab) {
    QueryRep q;
    std::size_t n = 1 + rng.next_u64() % 4;
    for (std::size_t i = 0; i < n; ++i)
        q.terms["t" + std::to_string(rng.next_u64() % vocab)] += 1.0;
    return q;
}

} // namespace

TEST_CASE("bm25_term_score matches the closed form") {
    auto index = InvertedIndex::build(kThreeDocs);
    BM25Params params{0.9, 0.4};

    // idf(a) = ln(1 + (3 - 2 + 0.5) / (2 + 0.5)) = ln(1.6); avg doclen = 2.
    double idf_a = std::log(1.6);
    // d1: tf 1, len 2 -> tf part = 1.9 / (1 + 0.9 * (0.6 + 0.4)) = 1
    CHECK(bm25_term_score(index, "a", 1, 0, params) ==
          Catch::Approx(idf_a).epsilon(1e-12));
    // d2: tf 2, len 3 -> tf part = 3.8 / (2 + 0.9 * (0.6 + 0.4 * 1.5))
    CHECK(bm25_term_score(index, "a", 2, 1, params) ==
          Catch::Approx(idf_a * (3.8 / 3.08)).epsilon(1e-12));

    CHECK_THROWS_AS(bm25_term_score(index, "zzz", 1, 0, params),
                    std::invalid_argument);
}

TEST_CASE("term in every document at average length") {
    auto index = InvertedIndex::build(
        {Document{"d1", "a x"}, Document{"d2", "a y"}, Document{"d3", "a z"}});
    BM25Params params{0.9, 0.4};
    double n = 3.0;
    double expected = std::log(1.0 + 0.5 / (n + 0.5)); // tf part collapses to 1
    CHECK(bm25_term_score(index, "a", 1, 0, params) ==
          Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bm25 score increases with tf") {
    auto index = InvertedIndex::build(kThreeDocs);
    BM25Params params{0.9, 0.4};
    CHECK(bm25_term_score(index, "a", 2, 0, params) >
          bm25_term_score(index, "a", 1, 0, params));
}

TEST_CASE("search basics on the three-document corpus") {
    auto index = InvertedIndex::build(kThreeDocs);

    auto only_c = search(index, QueryRep::from_text("c"), 10);
    REQUIRE(only_c.size() == 1);
    CHECK(only_c[0].ext_id == "d3");

    auto ab = search(index, QueryRep::from_text("a b"), 10);
    auto want = oracle::brute_force_bm25(kThreeDocs, QueryRep::from_text("a b"),
                                         10, BM25Params{});
    REQUIRE(ab.size() == want.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
        CHECK(ab[i].ext_id == want[i].ext_id);
        CHECK(ab[i].score == Catch::Approx(want[i].score).margin(1e-12));
    }
    CHECK(ab[0].ext_id == "d2"); // higher tf of "a" wins

    CHECK(search(index, QueryRep::from_text("zzz"), 10).empty());
    CHECK(search(index, QueryRep::from_text(", !"), 10).empty());
}

TEST_CASE("search equals the brute-force scorer on random corpora") {
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        auto corpus = random_corpus(rng, 50, 20);
        auto index = InvertedIndex::build(corpus);
        BM25Params params{0.9, 0.4};
        for (int q = 0; q < 3; ++q) {
            auto query = random_query(rng, 20);
            auto got = search(index, query, corpus.size(), params);
            auto want = oracle::brute_force_bm25(corpus, query, corpus.size(), params);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].ext_id == want[i].ext_id);
                CHECK(got[i].score == Catch::Approx(want[i].score).margin(1e-9));
            }
        }
    }
}

TEST_CASE("scaling query weights scales scores and keeps the order") {
    SplitMix64 rng(77);
    auto corpus = random_corpus(rng, 30, 10);
    auto index = InvertedIndex::build(corpus);
    auto query = random_query(rng, 10);
    auto base = search(index, query, corpus.size());

    QueryRep scaled;
    for (auto& [t, w] : query.terms)
        scaled.terms[t] = 3.5 * w;
    auto got = search(index, scaled, corpus.size());
    REQUIRE(got.size() == base.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].ext_id == base[i].ext_id);
        CHECK(got[i].score == Catch::Approx(3.5 * base[i].score).margin(1e-9));
    }
}

TEST_CASE("documents without query terms never change the retrieved set") {
    SplitMix64 rng(78);
    for (int trial = 0; trial < 20; ++trial) {
        auto corpus = random_corpus(rng, 25, 8);
        auto query = random_query(rng, 8);
        auto base = search(InvertedIndex::build(corpus), query, corpus.size());

        auto padded = corpus;
        padded.push_back(Document{"zz_pad", "pad0 pad1 pad2"});
        auto got = search(InvertedIndex::build(padded), query, padded.size());

        std::set<std::string> base_ids, got_ids;
        for (auto& d : base)
            base_ids.insert(d.ext_id);
        for (auto& d : got)
            got_ids.insert(d.ext_id);
        CHECK(base_ids == got_ids);
    }
}

TEST_CASE("rm3 interpolation identity at orig_weight 1") {
    auto index = InvertedIndex::build(kThreeDocs);
    QueryRep query = QueryRep::from_text("a a b");
    auto feedback = search(index, query, 10);
    RM3Params params{2, 5, 1.0};
    auto out = rm3_expand(index, query, feedback, params);
    // exactly the normalized original, regardless of feedback
    REQUIRE(out.terms.size() == 2);
    CHECK(out.terms.at("a") == Catch::Approx(2.0 / 3.0));
    CHECK(out.terms.at("b") == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("single-document relevance model is the document's unigram") {
    auto index = InvertedIndex::build(kThreeDocs);
    QueryRep query = QueryRep::from_text("b");
    std::vector<ScoredDoc> feedback{{"d2", 1.7}}; // "a a b"
    RM3Params params{1, 2, 0.0};
    auto out = rm3_expand(index, query, feedback, params);
    REQUIRE(out.terms.size() == 2);
    CHECK(out.terms.at("a") == Catch::Approx(2.0 / 3.0));
    CHECK(out.terms.at("b") == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("relevance model truncation to the heaviest term") {
    auto index = InvertedIndex::build(
        {Document{"d1", "a b"}, Document{"d2", "a c"}, Document{"d3", "q"}});
    QueryRep query = QueryRep::from_text("a");
    // equal feedback scores -> softmax gives both docs weight 1/2
    std::vector<ScoredDoc> feedback{{"d1", 2.0}, {"d2", 2.0}};
    RM3Params params{2, 1, 0.0};
    // rm = {a: 1/2, b: 1/4, c: 1/4}; top-1 and renormalize -> {a: 1}
    auto out = rm3_expand(index, query, feedback, params);
    REQUIRE(out.terms.size() == 1);
    CHECK(out.terms.at("a") == Catch::Approx(1.0));
}

TEST_CASE("rm3 rejects empty feedback") {
    auto index = InvertedIndex::build(kThreeDocs);
    CHECK_THROWS_WITH(rm3_expand(index, QueryRep::from_text("a"), {}, RM3Params{}),
                      Catch::Matchers::ContainsSubstring("feedback"));
}

TEST_CASE("rm3 output is a distribution with bounded support") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        auto corpus = random_corpus(rng, 20, 8);
        auto index = InvertedIndex::build(corpus);
        auto query = random_query(rng, 8);
        auto feedback = search(index, query, 10);
        if (feedback.empty())
            continue;
        RM3Params params{3, 4, 0.3};
        auto out = rm3_expand(index, query, feedback, params);
        double total = 0.0;
        for (auto& [_, w] : out.terms) {
            CHECK(w > 0.0);
            total += w;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-9));
        CHECK(out.terms.size() <= params.fb_terms + query.terms.size());
    }
}

TEST_CASE("search_rm3 with orig_weight 1 ranks exactly like plain search") {
    SplitMix64 rng(55);
    auto corpus = random_corpus(rng, 40, 10);
    auto index = InvertedIndex::build(corpus);
    for (int q = 0; q < 10; ++q) {
        auto query = random_query(rng, 10);
        auto plain = search(index, query, corpus.size());
        RM3Params params{5, 5, 1.0};
        auto rm3 = search_rm3(index, query, corpus.size(), BM25Params{}, params);
        REQUIRE(plain.size() == rm3.size());
        for (std::size_t i = 0; i < plain.size(); ++i)
            CHECK(plain[i].ext_id == rm3[i].ext_id);
    }
}

TEST_CASE("search_rm3 with an empty first pass returns it unchanged") {
    auto index = InvertedIndex::build(kThreeDocs);
    auto got = search_rm3(index, QueryRep::from_text("zzz"), 10, BM25Params{},
                          RM3Params{});
    CHECK(got.empty());
}

TEST_CASE("rm3 feedback bridges vocabulary the query lacks") {
    // d3 shares no term with the query but is reachable through feedback.
    auto corpus = std::vector<Document>{
        Document{"d1", "x y"}, Document{"d2", "x y"}, Document{"d3", "y b"},
        Document{"d4", "z"}, Document{"d5", "w"}};
    auto index = InvertedIndex::build(corpus);
    QueryRep query = QueryRep::from_text("x");

    RM3Params params{2, 5, 0.5};
    auto out = search_rm3(index, query, 5, BM25Params{}, params);
    bool found_d3 = false;
    for (auto& d : out)
        found_d3 |= d.ext_id == "d3";
    CHECK(found_d3);

    // the full-scan oracle agrees once the query carries the bridge term
    auto expanded = rm3_expand(index, query, search(index, query, 5), params);
    auto want = oracle::brute_force_bm25(corpus, expanded, 5, BM25Params{});
    auto got = search(index, expanded, 5);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i].ext_id == want[i].ext_id);
}
