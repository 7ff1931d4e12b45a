// Command-line front end for the document-expansion retrieval pipeline.
// Subcommands cover the whole flow: train-generator/generate/expand produce
// expansion files, index builds the (optionally expanded) inverted index,
// search emits TREC runs, eval/analyze/sweep/bench score and measure them.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expando/expando.hpp"

namespace {

using nlohmann::json;

expando::StopwordList load_stops(const std::string& path) {
    return path.empty() ? expando::StopwordList::default_english()
                        : expando::StopwordList::from_file(path);
}

// Config precedence: defaults < config file < explicit flags. Flags are
// bound to a scratch Config; whatever the user actually passed is copied
// over the file-loaded values afterwards.
struct ConfigBinding {
    expando::Config flags;   // receives command-line values
    std::string config_path;

    CLI::Option* opt_k1 = nullptr;
    CLI::Option* opt_b = nullptr;
    CLI::Option* opt_fb_docs = nullptr;
    CLI::Option* opt_fb_terms = nullptr;
    CLI::Option* opt_orig_weight = nullptr;
    CLI::Option* opt_num_queries = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_k = nullptr;
    CLI::Option* opt_topk = nullptr;
    CLI::Option* opt_max_len = nullptr;
    CLI::Option* opt_mix = nullptr;
    CLI::Option* opt_alpha = nullptr;
    CLI::Option* opt_rm3 = nullptr;
    std::string method;
    CLI::Option* opt_method = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "TOML-style key = value config file");
        opt_k1 = cmd->add_option("--k1", flags.bm25.k1, "BM25 k1 (default 0.9)");
        opt_b = cmd->add_option("--b", flags.bm25.b, "BM25 b (default 0.4)");
        opt_fb_docs = cmd->add_option("--fb-docs", flags.rm3.fb_docs,
                                      "RM3 feedback documents (default 10)");
        opt_fb_terms = cmd->add_option("--fb-terms", flags.rm3.fb_terms,
                                       "RM3 expansion terms (default 10)");
        opt_orig_weight =
            cmd->add_option("--orig-weight", flags.rm3.orig_weight,
                            "RM3 original-query weight (default 0.5)");
        opt_num_queries =
            cmd->add_option("--num-queries", flags.num_queries,
                            "predicted queries per document (default 10)");
        opt_seed = cmd->add_option("--seed", flags.seed, "PRNG seed (default 0)");
        opt_k = cmd->add_option("--k", flags.k, "retrieval depth (default 1000)");
        opt_topk = cmd->add_option("--topk", flags.decode.topk,
                                   "sampling candidate pool size (default 10)");
        opt_max_len = cmd->add_option("--max-len", flags.decode.max_len,
                                      "decoder length cap (default 20)");
        opt_mix =
            cmd->add_option("--mix", flags.mix, "count-model copy weight (default 0.7)");
        opt_alpha = cmd->add_option("--alpha", flags.alpha,
                                    "count-model smoothing (default 0.1)");
        opt_rm3 = cmd->add_flag("--rm3", flags.use_rm3,
                                "apply RM3 query expansion at search time");
        opt_method = cmd->add_option("--method", method,
                                     "decoding method: topk or beam (default topk)")
                         ->check(CLI::IsMember({"topk", "beam"}));
    }

    expando::Config resolve() const {
        expando::Config cfg;
        if (!config_path.empty())
            cfg = expando::load_config(config_path);
        if (opt_k1->count())
            cfg.bm25.k1 = flags.bm25.k1;
        if (opt_b->count())
            cfg.bm25.b = flags.bm25.b;
        if (opt_fb_docs->count())
            cfg.rm3.fb_docs = flags.rm3.fb_docs;
        if (opt_fb_terms->count())
            cfg.rm3.fb_terms = flags.rm3.fb_terms;
        if (opt_orig_weight->count())
            cfg.rm3.orig_weight = flags.rm3.orig_weight;
        if (opt_num_queries->count())
            cfg.num_queries = flags.num_queries;
        if (opt_seed->count())
            cfg.seed = flags.seed;
        if (opt_k->count())
            cfg.k = flags.k;
        if (opt_topk->count())
            cfg.decode.topk = flags.decode.topk;
        if (opt_max_len->count())
            cfg.decode.max_len = flags.decode.max_len;
        if (opt_mix->count())
            cfg.mix = flags.mix;
        if (opt_alpha->count())
            cfg.alpha = flags.alpha;
        if (opt_rm3->count())
            cfg.use_rm3 = true;
        if (opt_method->count())
            cfg.decode.method = method == "beam" ? expando::DecodeMethod::beam
                                                 : expando::DecodeMethod::topk;
        return cfg;
    }
};

int cmd_index(const std::string& corpus_path, const std::string& out_path,
              const std::string& expansions_path, bool summary,
              const expando::Config& cfg) {
    expando::InvertedIndex::Builder builder;
    expando::ApplyStats stats;
    if (expansions_path.empty()) {
        expando::for_each_corpus_doc(corpus_path, [&](expando::Document&& doc) {
            builder.add(doc);
            ++stats.unexpanded;
        });
    } else {
        auto records = expando::read_expansion_tsv(expansions_path);
        std::unordered_map<std::string, const expando::ExpansionRecord*> by_id;
        for (const auto& r : records)
            by_id.emplace(r.ext_id, &r);
        std::unordered_set<std::string> used;
        expando::for_each_corpus_doc(corpus_path, [&](expando::Document&& doc) {
            auto it = by_id.find(doc.ext_id);
            if (it == by_id.end()) {
                ++stats.unexpanded;
                builder.add(doc);
            } else {
                ++stats.expanded;
                used.insert(doc.ext_id);
                builder.add(expando::expand_document(doc, it->second->queries));
            }
        });
        for (const auto& r : records)
            if (!used.count(r.ext_id))
                throw std::invalid_argument(
                    "expansion record for unknown document: " + r.ext_id);
    }
    auto index = builder.finish();
    index.write(out_path);
    expando::echo_config(out_path, cfg);
    if (summary) {
        json j;
        j["n_docs"] = index.n_docs();
        j["n_terms"] = index.n_terms();
        j["total_tokens"] = index.total_tokens();
        j["avg_doclen"] = index.avg_doclen();
        j["expanded_docs"] = stats.expanded;
        j["unexpanded_docs"] = stats.unexpanded;
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int cmd_expand(const std::string& corpus_path, const std::string& expansions_path,
               const std::string& out_path, const std::string& filter,
               const std::string& stopword_path, bool cap_queries,
               const expando::Config& cfg) {
    auto corpus = expando::read_corpus_tsv(corpus_path);
    auto records = expando::read_expansion_tsv(expansions_path);
    auto stops = load_stops(stopword_path);

    std::unordered_map<std::string, const std::string*> text_of;
    for (const auto& d : corpus)
        text_of.emplace(d.ext_id, &d.text);

    expando::FilterMode mode = expando::FilterMode::all;
    if (filter == "copied")
        mode = expando::FilterMode::copied_only;
    else if (filter == "new")
        mode = expando::FilterMode::new_only;

    std::vector<expando::ExpansionRecord> out;
    out.reserve(records.size());
    for (auto& r : records) {
        auto it = text_of.find(r.ext_id);
        if (it == text_of.end())
            throw std::invalid_argument("expansion record for unknown document: " +
                                        r.ext_id);
        auto filtered = expando::filter_expansion(r, *it->second, stops, mode);
        if (cap_queries && filtered.queries.size() > cfg.num_queries)
            filtered.queries.resize(cfg.num_queries);
        out.push_back(std::move(filtered));
    }
    expando::write_expansion_tsv(out_path, out);
    expando::echo_config(out_path, cfg);
    return 0;
}

int cmd_generate(const std::string& corpus_path, const std::string& out_path,
                 const std::string& model_path, const std::string& generator,
                 const std::string& stopword_path, const expando::Config& cfg) {
    auto corpus = expando::read_corpus_tsv(corpus_path);

    std::unique_ptr<expando::CountSeq2Seq> model;
    std::unique_ptr<expando::QueryGenerator> gen;
    if (!model_path.empty()) {
        model = std::make_unique<expando::CountSeq2Seq>(
            expando::CountSeq2Seq::read(model_path));
        gen = std::make_unique<expando::ModelGenerator>(*model, cfg.decode);
    } else if (generator == "copy") {
        gen = std::make_unique<expando::CopyGenerator>(load_stops(stopword_path));
    } else {
        throw std::runtime_error("generate needs --model or --generator copy");
    }

    std::vector<expando::ExpansionRecord> records;
    records.reserve(corpus.size());
    for (const auto& doc : corpus) {
        expando::Document clipped{
            doc.ext_id, expando::join_tokens(expando::truncate_tokens(
                            expando::tokenize(doc.text), expando::kDocTokenLimit))};
        try {
            records.push_back(expando::ExpansionRecord{
                doc.ext_id, gen->generate(clipped, cfg.num_queries, cfg.seed)});
        } catch (const std::exception& e) {
            throw std::runtime_error("expansion failed for document " + doc.ext_id +
                                     ": " + e.what());
        }
    }
    expando::write_expansion_tsv(out_path, records);
    expando::echo_config(out_path, cfg);
    return 0;
}

int cmd_train(const std::string& pairs_path, const std::string& out_path,
              const expando::Config& cfg) {
    auto pairs = expando::read_pairs_tsv(pairs_path);
    auto model = expando::train_count_model(pairs, cfg.mix, cfg.alpha);
    model.write(out_path);
    expando::echo_config(out_path, cfg);
    return 0;
}

int cmd_search(const std::string& index_path, const std::string& queries_path,
               const std::string& out_path, const std::string& tag,
               const std::string& rerank_path, std::size_t rerank_depth,
               bool rm3_drop_stopwords, const std::string& stopword_path,
               const expando::Config& cfg) {
    auto index = expando::InvertedIndex::read(index_path);
    auto queries = expando::read_queries_tsv(queries_path);

    std::optional<expando::RM3Params> rm3;
    if (cfg.use_rm3)
        rm3 = cfg.rm3;
    expando::StopwordList stops;
    const expando::StopwordList* skip = nullptr;
    if (rm3_drop_stopwords) {
        stops = load_stops(stopword_path);
        skip = &stops;
    }

    auto run = expando::run_search(index, queries, cfg.k, cfg.bm25, rm3, skip);
    if (!rerank_path.empty()) {
        auto scores = expando::read_scores_tsv(rerank_path);
        run = expando::rerank_merge(run, scores,
                                    rerank_depth ? rerank_depth : cfg.k);
    }
    expando::write_run(out_path, run, tag);
    expando::echo_config(out_path, cfg);
    return 0;
}

int cmd_eval(const std::string& run_path, const std::string& qrels_path,
             bool per_query, bool as_json) {
    auto run = expando::read_run(run_path);
    auto qrels = expando::read_qrels(qrels_path);
    if (qrels.by_qid.empty())
        throw std::runtime_error("empty qrels: " + qrels_path);

    auto mrr = expando::mrr_at_k(run, qrels, 10);
    auto map = expando::map_metric(run, qrels, 1000);
    auto recall = expando::recall_at_k(run, qrels, 1000);

    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    if (as_json) {
        json j;
        j["mrr@10"] = mrr.mean;
        j["map"] = map.mean;
        j["recall@1000"] = recall.mean;
        j["n_queries"] = qrels.n_queries();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "mrr@10\t" << fmt(mrr.mean) << "\n";
        std::cout << "map\t" << fmt(map.mean) << "\n";
        std::cout << "recall@1000\t" << fmt(recall.mean) << "\n";
    }
    if (per_query) {
        for (const auto& [qid, v] : mrr.per_query)
            std::cout << "mrr@10\t" << qid << "\t" << fmt(v) << "\n";
        for (const auto& [qid, v] : map.per_query)
            std::cout << "map\t" << qid << "\t" << fmt(v) << "\n";
        for (const auto& [qid, v] : recall.per_query)
            std::cout << "recall@1000\t" << qid << "\t" << fmt(v) << "\n";
    }
    return 0;
}

int cmd_analyze(const std::string& corpus_path, const std::string& expansions_path,
                const std::string& stopword_path, bool by_types) {
    auto corpus = expando::read_corpus_tsv(corpus_path);
    auto records = expando::read_expansion_tsv(expansions_path);
    auto stops = load_stops(stopword_path);
    auto stats = expando::expansion_stats(corpus, records, stops, by_types);
    json j;
    j["stop_frac"] = stats.stop_frac;
    j["copied_frac"] = stats.copied_frac;
    j["new_frac"] = stats.new_frac;
    j["warnings"] = stats.warnings;
    j["weighting"] = by_types ? "types" : "occurrences";
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_sweep(const std::string& corpus_path, const std::string& queries_path,
              const std::string& qrels_path, const std::string& out_path,
              const std::string& expansions_path, const std::string& model_path,
              const std::string& generator, const std::string& ns_csv,
              const std::string& stopword_path, const expando::Config& cfg) {
    auto corpus = expando::read_corpus_tsv(corpus_path);
    auto queries = expando::read_queries_tsv(queries_path);
    auto qrels = expando::read_qrels(qrels_path);

    std::vector<std::size_t> ns;
    {
        std::stringstream ss(ns_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                ns.push_back(std::stoul(item));
    }
    if (ns.empty())
        throw std::runtime_error("sweep needs --ns, e.g. --ns 0,1,5,10,20");

    std::unique_ptr<expando::CountSeq2Seq> model;
    std::unique_ptr<expando::QueryGenerator> gen;
    if (!expansions_path.empty()) {
        gen = std::make_unique<expando::FileBackedGenerator>(
            expando::read_expansion_tsv(expansions_path));
    } else if (!model_path.empty()) {
        model = std::make_unique<expando::CountSeq2Seq>(
            expando::CountSeq2Seq::read(model_path));
        gen = std::make_unique<expando::ModelGenerator>(*model, cfg.decode);
    } else if (generator == "copy") {
        gen = std::make_unique<expando::CopyGenerator>(load_stops(stopword_path));
    } else {
        throw std::runtime_error(
            "sweep needs --expansions, --model or --generator copy");
    }

    auto points = expando::sweep_num_queries(corpus, *gen, queries, qrels, ns,
                                             cfg.seed, cfg.k, cfg.bm25);
    expando::write_sweep_tsv(out_path, points);
    expando::echo_config(out_path, cfg);
    for (const auto& p : points)
        std::cout << p.n_appended << "\t" << p.mrr10 << "\n";
    return 0;
}

int cmd_bench(const std::string& index_path, const std::string& queries_path,
              std::size_t warmup, std::size_t reps, const std::string& label,
              const std::string& out_path, const expando::Config& cfg) {
    auto index = expando::InvertedIndex::read(index_path);
    auto query_pairs = expando::read_queries_tsv(queries_path);
    std::vector<std::string> queries;
    queries.reserve(query_pairs.size());
    for (auto& [_, text] : query_pairs)
        queries.push_back(text);

    auto report = expando::measure_latency(index, queries, cfg.k, warmup, reps,
                                           cfg.bm25, label);
    json j;
    j["label"] = report.label;
    j["n_queries"] = report.n_queries;
    j["mean_ms"] = report.mean_ms;
    j["p50_ms"] = report.p50_ms;
    j["p95_ms"] = report.p95_ms;
    std::cout << j.dump() << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open report file for writing: " +
                                     out_path);
        out << j.dump() << "\n";
        expando::echo_config(out_path, cfg);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"expando: document-expansion retrieval engine"};
    app.require_subcommand(1);

    // index
    auto* index_cmd = app.add_subcommand("index", "build an inverted index");
    std::string idx_corpus, idx_out, idx_expansions;
    bool idx_summary = false;
    index_cmd->add_option("--corpus", idx_corpus, "corpus TSV (ext_id<TAB>text)")
        ->required();
    index_cmd->add_option("--out", idx_out, "output index file")->required();
    index_cmd->add_option("--expansions", idx_expansions,
                          "expansion TSV to append before indexing");
    index_cmd->add_flag("--summary", idx_summary, "print a JSON summary");
    ConfigBinding idx_cfg;
    idx_cfg.attach(index_cmd);

    // expand
    auto* expand_cmd =
        app.add_subcommand("expand", "filter or pass through an expansion file");
    std::string exp_corpus, exp_in, exp_out, exp_filter = "all", exp_stops;
    bool exp_cap = false;
    expand_cmd->add_option("--corpus", exp_corpus, "corpus TSV")->required();
    expand_cmd->add_option("--expansions", exp_in, "input expansion TSV")
        ->required();
    expand_cmd->add_option("--out", exp_out, "output expansion TSV")->required();
    expand_cmd
        ->add_option("--filter", exp_filter,
                     "token filter: all, copied or new (default all)")
        ->check(CLI::IsMember({"all", "copied", "new"}));
    expand_cmd->add_option("--stopwords", exp_stops, "stopword file");
    expand_cmd->add_flag("--cap", exp_cap,
                         "cap each record at --num-queries queries");
    ConfigBinding exp_cfg;
    exp_cfg.attach(expand_cmd);

    // generate
    auto* gen_cmd =
        app.add_subcommand("generate", "predict queries with a trained model");
    std::string gen_corpus, gen_out, gen_model, gen_generator, gen_stops;
    gen_cmd->add_option("--corpus", gen_corpus, "corpus TSV")->required();
    gen_cmd->add_option("--out", gen_out, "output expansion TSV")->required();
    gen_cmd->add_option("--model", gen_model, "trained count-model file");
    gen_cmd->add_option("--generator", gen_generator,
                        "built-in generator (copy)");
    gen_cmd->add_option("--stopwords", gen_stops, "stopword file");
    ConfigBinding gen_cfg;
    gen_cfg.attach(gen_cmd);

    // train-generator
    auto* train_cmd =
        app.add_subcommand("train-generator", "fit the count model from pairs");
    std::string train_pairs, train_out;
    train_cmd->add_option("--pairs", train_pairs, "pairs TSV (query<TAB>doc_text)")
        ->required();
    train_cmd->add_option("--out", train_out, "output model file")->required();
    ConfigBinding train_cfg;
    train_cfg.attach(train_cmd);

    // search
    auto* search_cmd = app.add_subcommand("search", "run queries, emit a TREC run");
    std::string s_index, s_queries, s_out, s_tag = "expando", s_rerank, s_stops;
    std::size_t s_rerank_depth = 0;
    bool s_rm3_drop_stops = false;
    search_cmd->add_option("--index", s_index, "index file")->required();
    search_cmd->add_option("--queries", s_queries, "query TSV (qid<TAB>text)")
        ->required();
    search_cmd->add_option("--out", s_out, "output run file")->required();
    search_cmd->add_option("--tag", s_tag, "run tag (default expando)");
    search_cmd->add_option("--rerank-scores", s_rerank,
                           "external score TSV (qid<TAB>ext_id<TAB>score)");
    search_cmd->add_option("--rerank-depth", s_rerank_depth,
                           "re-rank depth (default --k)");
    search_cmd->add_flag("--rm3-drop-stopwords", s_rm3_drop_stops,
                         "drop stopwords from RM3 expansion terms");
    search_cmd->add_option("--stopwords", s_stops, "stopword file");
    ConfigBinding search_cfg;
    search_cfg.attach(search_cmd);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a run against qrels");
    std::string e_run, e_qrels;
    bool e_per_query = false, e_json = false;
    eval_cmd->add_option("--run", e_run, "run file")->required();
    eval_cmd->add_option("--qrels", e_qrels, "qrels file")->required();
    eval_cmd->add_flag("--per-query", e_per_query, "also print per-query values");
    eval_cmd->add_flag("--json", e_json, "print a JSON object");

    // analyze
    auto* analyze_cmd =
        app.add_subcommand("analyze", "copied/new/stopword expansion statistics");
    std::string a_corpus, a_expansions, a_stops;
    bool a_by_types = false;
    analyze_cmd->add_option("--corpus", a_corpus, "corpus TSV")->required();
    analyze_cmd->add_option("--expansions", a_expansions, "expansion TSV")
        ->required();
    analyze_cmd->add_option("--stopwords", a_stops, "stopword file");
    analyze_cmd->add_flag("--by-types", a_by_types,
                          "weight by distinct tokens instead of occurrences");

    // sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "effectiveness vs number of appended queries");
    std::string sw_corpus, sw_queries, sw_qrels, sw_out, sw_expansions, sw_model,
        sw_generator, sw_ns = "0,1,5,10,20", sw_stops;
    sweep_cmd->add_option("--corpus", sw_corpus, "corpus TSV")->required();
    sweep_cmd->add_option("--queries", sw_queries, "query TSV")->required();
    sweep_cmd->add_option("--qrels", sw_qrels, "qrels file")->required();
    sweep_cmd->add_option("--out", sw_out, "output TSV (n<TAB>mrr10)")->required();
    sweep_cmd->add_option("--expansions", sw_expansions,
                          "expansion TSV to draw queries from");
    sweep_cmd->add_option("--model", sw_model, "trained count-model file");
    sweep_cmd->add_option("--generator", sw_generator, "built-in generator (copy)");
    sweep_cmd->add_option("--ns", sw_ns, "comma-separated counts (default 0,1,5,10,20)");
    sweep_cmd->add_option("--stopwords", sw_stops, "stopword file");
    ConfigBinding sweep_cfg;
    sweep_cfg.attach(sweep_cmd);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "per-query retrieval latency");
    std::string b_index, b_queries, b_label, b_out;
    std::size_t b_warmup = 1, b_reps = 3;
    bench_cmd->add_option("--index", b_index, "index file")->required();
    bench_cmd->add_option("--queries", b_queries, "query TSV")->required();
    bench_cmd->add_option("--warmup", b_warmup, "warmup passes (default 1)");
    bench_cmd->add_option("--reps", b_reps, "timed passes (default 3)");
    bench_cmd->add_option("--label", b_label, "report label");
    bench_cmd->add_option("--out", b_out, "also write the JSON report here");
    ConfigBinding bench_cfg;
    bench_cfg.attach(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (index_cmd->parsed())
            return cmd_index(idx_corpus, idx_out, idx_expansions, idx_summary,
                             idx_cfg.resolve());
        if (expand_cmd->parsed())
            return cmd_expand(exp_corpus, exp_in, exp_out, exp_filter, exp_stops,
                              exp_cap, exp_cfg.resolve());
        if (gen_cmd->parsed())
            return cmd_generate(gen_corpus, gen_out, gen_model, gen_generator,
                                gen_stops, gen_cfg.resolve());
        if (train_cmd->parsed())
            return cmd_train(train_pairs, train_out, train_cfg.resolve());
        if (search_cmd->parsed())
            return cmd_search(s_index, s_queries, s_out, s_tag, s_rerank,
                              s_rerank_depth, s_rm3_drop_stops, s_stops,
                              search_cfg.resolve());
        if (eval_cmd->parsed())
            return cmd_eval(e_run, e_qrels, e_per_query, e_json);
        if (analyze_cmd->parsed())
            return cmd_analyze(a_corpus, a_expansions, a_stops, a_by_types);
        if (sweep_cmd->parsed())
            return cmd_sweep(sw_corpus, sw_queries, sw_qrels, sw_out, sw_expansions,
                             sw_model, sw_generator, sw_ns, sw_stops,
                             sweep_cfg.resolve());
        if (bench_cmd->parsed())
            return cmd_bench(b_index, b_queries, b_warmup, b_reps, b_label, b_out,
                             bench_cfg.resolve());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand given\n";
    return 1;
}
