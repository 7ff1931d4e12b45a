#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expando/eval.hpp"
#include "expando/expansion.hpp"
#include "expando/index.hpp"
#include "expando/pipeline.hpp"
#include "expando/retrieval.hpp"

namespace expando {

struct LatencyReport {
    std::size_t n_queries = 0;
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
    std::string label;
};

namespace detail {

// Nearest-rank percentile over a sorted sample.
inline double percentile(const std::vector<double>& sorted, double q) {
    std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(n)));
    if (rank == 0)
        rank = 1;
    return sorted[rank - 1];
}

} // namespace detail

/// Wall-clock per-query cost of tokenize + top-k retrieval, measured in a
/// strictly single-threaded loop. `warmup` full passes over the query set
/// are discarded; `reps` passes are timed, one sample per query execution.
/// Index load time is not included.
inline LatencyReport measure_latency(const InvertedIndex& index,
                                     const std::vector<std::string>& queries,
                                     std::size_t k, std::size_t warmup,
                                     std::size_t reps,
                                     const BM25Params& params = {},
                                     std::string label = {}) {
    if (reps < 1)
        throw std::invalid_argument("reps must be >= 1");
    if (queries.empty())
        throw std::invalid_argument("no queries to measure");

    using clock = std::chrono::steady_clock;
    std::size_t sink = 0; // keep the search from being optimized out

    for (std::size_t w = 0; w < warmup; ++w)
        for (const auto& text : queries)
            sink += search(index, QueryRep::from_text(text), k, params).size();

    std::vector<double> samples;
    samples.reserve(reps * queries.size());
    for (std::size_t r = 0; r < reps; ++r) {
        for (const auto& text : queries) {
            auto t0 = clock::now();
            sink += search(index, QueryRep::from_text(text), k, params).size();
            auto t1 = clock::now();
            samples.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    }
    if (sink == static_cast<std::size_t>(-1))
        throw std::runtime_error("unreachable");

    LatencyReport report;
    report.n_queries = queries.size();
    report.label = std::move(label);
    double total = 0.0;
    for (double s : samples)
        total += s;
    report.mean_ms = total / static_cast<double>(samples.size());
    std::sort(samples.begin(), samples.end());
    report.p50_ms = detail::percentile(samples, 0.50);
    report.p95_ms = detail::percentile(samples, 0.95);
    return report;
}

struct SweepPoint {
    std::size_t n_appended = 0;
    double mrr10 = 0.0;
};

/// Effectiveness sweep over the number of appended queries: for each n the
/// corpus is expanded with n predicted queries, re-indexed from scratch,
/// retrieved against, and scored with MRR@10. n = 0 is exactly the
/// unexpanded baseline pipeline.
inline std::vector<SweepPoint>
sweep_num_queries(const std::vector<Document>& corpus, QueryGenerator& gen,
                  const std::vector<std::pair<std::string, std::string>>& queries,
                  const Qrels& qrels, const std::vector<std::size_t>& ns,
                  std::uint64_t seed, std::size_t k = 1000,
                  const BM25Params& params = {}) {
    if (ns.empty())
        throw std::invalid_argument("no sweep points");
    std::vector<SweepPoint> points;
    points.reserve(ns.size());
    for (std::size_t n : ns) {
        try {
            auto expanded = expand_corpus(corpus, gen, n, seed);
            auto index = InvertedIndex::build(expanded);
            auto run = run_search(index, queries, k, params);
            points.push_back(SweepPoint{n, mrr_at_k(run, qrels, 10).mean});
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep failed at n=" + std::to_string(n) +
                                     ": " + e.what());
        }
    }
    return points;
}

inline void write_sweep_tsv(const std::string& path,
                            const std::vector<SweepPoint>& points) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open sweep file for writing: " + path);
    char buf[64];
    out << "n\tmrr10\n";
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.6f", p.mrr10);
        out << p.n_appended << '\t' << buf << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace expando
