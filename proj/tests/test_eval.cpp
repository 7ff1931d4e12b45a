#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "expando/eval.hpp"
#include "expando/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace expando;

namespace {

Run make_run(std::initializer_list<
             std::pair<std::string, std::vector<std::pair<std::string, double>>>>
                 entries) {
    Run run;
    for (auto& [qid, docs] : entries)
        for (auto& [id, score] : docs)
            run.by_qid[qid].push_back(RunEntry{id, score});
    return run;
}

Qrels make_qrels(std::initializer_list<
                 std::pair<std::string, std::vector<std::pair<std::string, int>>>>
                     entries) {
    Qrels qrels;
    for (auto& [qid, docs] : entries)
        for (auto& [id, grade] : docs)
            qrels.by_qid[qid][id] = grade;
    return qrels;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

// Random run/qrels fixtures with distinct scores.
struct Fixture {
    Run run;
    Qrels qrels;
};

Fixture random_fixture(SplitMix64& rng) {
    Fixture f;
    std::size_t n_queries = 1 + rng.next_u64() % 6;
    for (std::size_t q = 0; q < n_queries; ++q) {
        std::string qid = "q" + std::to_string(q);
        std::size_t n_docs = rng.next_u64() % 30;
        std::vector<double> scores;
        for (std::size_t d = 0; d < n_docs; ++d)
            scores.push_back(static_cast<double>(n_docs - d) +
                             rng.next_double() * 0.5);
        std::sort(scores.rbegin(), scores.rend());
        for (std::size_t d = 0; d < n_docs; ++d)
            f.run.by_qid[qid].push_back(
                RunEntry{"d" + std::to_string(d), scores[d]});
        std::size_t n_judged = 1 + rng.next_u64() % 10;
        for (std::size_t j = 0; j < n_judged; ++j)
            f.qrels.by_qid[qid]["d" + std::to_string(rng.next_u64() % 40)] =
                rng.next_double() < 0.7 ? 1 : 0;
        if (f.qrels.by_qid[qid].empty())
            f.qrels.by_qid[qid]["d0"] = 1;
    }
    return f;
}

} // namespace

TEST_CASE("mrr fixture values") {
    auto qrels = make_qrels({{"q1", {{"rel", 1}}}, {"q2", {{"rel2", 1}}}});

    SECTION("first relevant at rank 3") {
        auto run = make_run({{"q1", {{"a", 3.0}, {"b", 2.0}, {"rel", 1.0}}}});
        auto report = mrr_at_k(run, qrels, 10);
        CHECK(report.per_query.at("q1") == Catch::Approx(1.0 / 3.0));
    }

    SECTION("first relevant at rank 11 with k = 10 scores zero") {
        Run run;
        for (int i = 0; i < 10; ++i)
            run.by_qid["q1"].push_back(
                RunEntry{"junk" + std::to_string(i), 20.0 - i});
        run.by_qid["q1"].push_back(RunEntry{"rel", 1.0});
        auto report = mrr_at_k(run, qrels, 10);
        CHECK(report.per_query.at("q1") == 0.0);
    }

    SECTION("mean over queries") {
        auto run = make_run({{"q1", {{"rel", 2.0}}},
                             {"q2", {{"x", 2.0}, {"rel2", 1.0}}}});
        auto report = mrr_at_k(run, qrels, 10);
        CHECK(report.per_query.at("q1") == 1.0);
        CHECK(report.per_query.at("q2") == 0.5);
        CHECK(report.mean == Catch::Approx(0.75));
    }
}

TEST_CASE("map fixture values") {
    SECTION("two relevant at ranks 1 and 3") {
        auto qrels = make_qrels({{"q1", {{"r1", 1}, {"r2", 1}}}});
        auto run = make_run({{"q1", {{"r1", 3.0}, {"x", 2.0}, {"r2", 1.0}}}});
        auto report = map_metric(run, qrels);
        CHECK(report.per_query.at("q1") == Catch::Approx((1.0 + 2.0 / 3.0) / 2.0));
    }

    SECTION("no relevant retrieved") {
        auto qrels = make_qrels({{"q1", {{"rel", 1}}}});
        auto run = make_run({{"q1", {{"x", 1.0}}}});
        CHECK(map_metric(run, qrels).per_query.at("q1") == 0.0);
    }

    SECTION("all R relevant at the top") {
        auto qrels = make_qrels({{"q1", {{"r1", 1}, {"r2", 1}, {"r3", 1}}}});
        auto run =
            make_run({{"q1", {{"r1", 3.0}, {"r2", 2.0}, {"r3", 1.0}}}});
        CHECK(map_metric(run, qrels).per_query.at("q1") == Catch::Approx(1.0));
    }

    SECTION("zero-relevant query warns and scores zero") {
        auto qrels = make_qrels({{"q1", {{"d", 0}}}});
        auto run = make_run({{"q1", {{"d", 1.0}}}});
        auto report = map_metric(run, qrels);
        CHECK(report.per_query.at("q1") == 0.0);
        CHECK(report.warnings == 1);
    }
}

TEST_CASE("recall fixture values") {
    auto qrels = make_qrels({{"q1", {{"r1", 1}, {"r2", 1}}}});

    SECTION("all relevant found") {
        auto run = make_run({{"q1", {{"r1", 2.0}, {"r2", 1.0}}}});
        CHECK(recall_at_k(run, qrels).per_query.at("q1") == 1.0);
    }

    SECTION("half found") {
        auto run = make_run({{"q1", {{"r1", 2.0}, {"x", 1.0}}}});
        CHECK(recall_at_k(run, qrels).per_query.at("q1") == 0.5);
    }

    SECTION("query missing from the run scores zero") {
        Run run;
        CHECK(recall_at_k(run, qrels).per_query.at("q1") == 0.0);
    }
}

TEST_CASE("metrics match the reference implementation on random fixtures") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_fixture(rng);
        CHECK(mrr_at_k(f.run, f.qrels, 10).mean ==
              Catch::Approx(oracle::ref_mrr(f.run, f.qrels, 10)).margin(1e-6));
        CHECK(map_metric(f.run, f.qrels, 1000).mean ==
              Catch::Approx(oracle::ref_map(f.run, f.qrels, 1000)).margin(1e-6));
        CHECK(recall_at_k(f.run, f.qrels, 1000).mean ==
              Catch::Approx(oracle::ref_recall(f.run, f.qrels, 1000)).margin(1e-6));
    }
}

TEST_CASE("metrics are invariant under positive affine score maps") {
    SplitMix64 rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_fixture(rng);
        Run scaled;
        for (auto& [qid, entries] : f.run.by_qid)
            for (auto& e : entries)
                scaled.by_qid[qid].push_back(RunEntry{e.ext_id, 2.5 * e.score + 7.0});
        CHECK(mrr_at_k(f.run, f.qrels, 10).mean ==
              Catch::Approx(mrr_at_k(scaled, f.qrels, 10).mean).margin(1e-12));
        CHECK(map_metric(f.run, f.qrels).mean ==
              Catch::Approx(map_metric(scaled, f.qrels).mean).margin(1e-12));
        CHECK(recall_at_k(f.run, f.qrels).mean ==
              Catch::Approx(recall_at_k(scaled, f.qrels).mean).margin(1e-12));
    }
}

TEST_CASE("mrr and recall are non-decreasing in k, all values in [0,1]") {
    SplitMix64 rng(2026);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_fixture(rng);
        double prev_mrr = 0.0, prev_recall = 0.0;
        for (std::size_t k : {1u, 2u, 5u, 10u, 100u}) {
            auto mrr = mrr_at_k(f.run, f.qrels, k);
            auto rec = recall_at_k(f.run, f.qrels, k);
            CHECK(mrr.mean >= prev_mrr - 1e-12);
            CHECK(rec.mean >= prev_recall - 1e-12);
            prev_mrr = mrr.mean;
            prev_recall = rec.mean;
            for (auto& [_, v] : mrr.per_query) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("run file roundtrip") {
    Run run = make_run({{"q1", {{"d7", 12.5}, {"d3", 11.0}}},
                        {"q2", {{"d1", 3.25}}}});
    auto path = temp_file("expando_run.trec");
    write_run(path.string(), run, "expando");

    // spot-check the emitted format
    {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "q1 Q0 d7 1 12.500000 expando");
    }
    auto loaded = read_run(path.string());
    REQUIRE(loaded.by_qid.size() == 2);
    CHECK(loaded.by_qid.at("q1")[0].ext_id == "d7");
    CHECK(loaded.by_qid.at("q1")[0].score == Catch::Approx(12.5));
    CHECK(loaded.by_qid.at("q1")[1].ext_id == "d3");
    CHECK(loaded.by_qid.at("q2")[0].score == Catch::Approx(3.25));
    std::filesystem::remove(path);
}

TEST_CASE("run file errors carry line numbers") {
    auto path = temp_file("expando_run_bad.trec");
    {
        std::ofstream out(path);
        out << "q1 Q0 d1 1 5.0 tag\n";
        out << "q1 Q0\n";
    }
    CHECK_THROWS_WITH(read_run(path.string()),
                      Catch::Matchers::ContainsSubstring("line 2"));

    {
        std::ofstream out(path);
        out << "q1 Q0 d1 1 5.0 tag\n";
        out << "q1 Q0 d1 2 4.0 tag\n";
    }
    CHECK_THROWS_WITH(read_run(path.string()),
                      Catch::Matchers::ContainsSubstring("duplicate"));
    std::filesystem::remove(path);
}

TEST_CASE("qrels accept TREC and MS MARCO layouts") {
    auto path = temp_file("expando_qrels.txt");
    SECTION("TREC four-column") {
        {
            std::ofstream out(path);
            out << "q1 0 d7 2\n";
            out << "q1 0 d8 0\n";
        }
        auto qrels = read_qrels(path.string());
        CHECK(qrels.by_qid.at("q1").at("d7") == 2);
        CHECK(qrels.by_qid.at("q1").at("d8") == 0);
    }
    SECTION("MS MARCO two-column TSV has implicit grade 1") {
        {
            std::ofstream out(path);
            out << "q1\td7\n";
        }
        auto qrels = read_qrels(path.string());
        CHECK(qrels.by_qid.at("q1").at("d7") == 1);
    }
    SECTION("duplicate pairs are rejected") {
        {
            std::ofstream out(path);
            out << "q1 0 d7 1\n";
            out << "q1 0 d7 1\n";
        }
        CHECK_THROWS_WITH(read_qrels(path.string()),
                          Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("malformed lines carry their number") {
        {
            std::ofstream out(path);
            out << "q1 0 d7\n";
        }
        CHECK_THROWS_WITH(read_qrels(path.string()),
                          Catch::Matchers::ContainsSubstring("line 1"));
    }
    std::filesystem::remove(path);
}

TEST_CASE("rerank merge") {
    Run run = make_run(
        {{"q1", {{"a", 5.0}, {"b", 4.0}, {"c", 3.0}, {"d", 2.0}}}});

    SECTION("empty scores is the identity") {
        auto out = rerank_merge(run, {}, 10);
        REQUIRE(out.by_qid.at("q1").size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(out.by_qid.at("q1")[i].ext_id == run.by_qid.at("q1")[i].ext_id);
            CHECK(out.by_qid.at("q1")[i].score == run.by_qid.at("q1")[i].score);
        }
    }

    SECTION("inverting the top two") {
        std::map<std::pair<std::string, std::string>, double> scores{
            {{"q1", "a"}, 0.1}, {{"q1", "b"}, 0.9}};
        auto out = rerank_merge(run, scores, 2);
        auto& entries = out.by_qid.at("q1");
        CHECK(entries[0].ext_id == "b");
        CHECK(entries[1].ext_id == "a");
        CHECK(entries[2].ext_id == "c");
        CHECK(entries[3].ext_id == "d");
        // run stays a valid non-increasing ranking
        for (std::size_t i = 1; i < entries.size(); ++i)
            CHECK(entries[i - 1].score >= entries[i].score);
    }

    SECTION("depth 1 cannot move anything") {
        std::map<std::pair<std::string, std::string>, double> scores{
            {{"q1", "d"}, 99.0}};
        auto out = rerank_merge(run, scores, 1);
        CHECK(out.by_qid.at("q1")[0].ext_id == "a");
        CHECK(out.by_qid.at("q1")[3].ext_id == "d");
    }

    SECTION("unscored documents sink but keep their relative order") {
        std::map<std::pair<std::string, std::string>, double> scores{
            {{"q1", "c"}, 1.0}};
        auto out = rerank_merge(run, scores, 4);
        auto& entries = out.by_qid.at("q1");
        CHECK(entries[0].ext_id == "c");
        CHECK(entries[1].ext_id == "a");
        CHECK(entries[2].ext_id == "b");
        CHECK(entries[3].ext_id == "d");
    }
}

TEST_CASE("expansion stats on the weather fixture") {
    std::vector<Document> corpus{{"w1", fixtures::kWeatherPassage}};
    std::vector<ExpansionRecord> records{{"w1", {fixtures::kWeatherPredicted}}};
    auto stats = expansion_stats(corpus, records,
                                 StopwordList::default_english());
    CHECK(stats.stop_frac == Catch::Approx(0.25));
    CHECK(stats.copied_frac == Catch::Approx(2.0 / 3.0));
    CHECK(stats.new_frac == Catch::Approx(1.0 / 3.0));
    CHECK(stats.copied_frac + stats.new_frac == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("expansion stats corner cases") {
    std::vector<Document> corpus{{"d1", "alpha beta"}};

    SECTION("all copied") {
        std::vector<ExpansionRecord> records{{"d1", {"alpha beta alpha"}}};
        auto stats =
            expansion_stats(corpus, records, StopwordList::default_english());
        CHECK(stats.stop_frac == 0.0);
        CHECK(stats.copied_frac == 1.0);
        CHECK(stats.new_frac == 0.0);
    }

    SECTION("empty records warn") {
        auto stats = expansion_stats(corpus, {}, StopwordList::default_english());
        CHECK(stats.warnings == 1);
        CHECK(stats.stop_frac == 0.0);
    }

    SECTION("unknown document is an error") {
        std::vector<ExpansionRecord> records{{"ghost", {"x"}}};
        CHECK_THROWS_WITH(
            expansion_stats(corpus, records, StopwordList::default_english()),
            Catch::Matchers::ContainsSubstring("ghost"));
    }

    SECTION("occurrence vs type weighting") {
        // "alpha alpha zeta": occurrences 2 copied 1 new; types 1 copied 1 new
        std::vector<ExpansionRecord> records{{"d1", {"alpha alpha zeta"}}};
        auto occ = expansion_stats(corpus, records, StopwordList::default_english(),
                                   false);
        auto typ = expansion_stats(corpus, records, StopwordList::default_english(),
                                   true);
        CHECK(occ.copied_frac == Catch::Approx(2.0 / 3.0));
        CHECK(typ.copied_frac == Catch::Approx(0.5));
    }
}
