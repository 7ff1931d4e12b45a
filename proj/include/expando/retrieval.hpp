#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "expando/index.hpp"
#include "expando/text.hpp"

namespace expando {

struct BM25Params {
    double k1 = 0.9;
    double b = 0.4;
};

/// Weighted query terms. A plain query maps each distinct term to its count;
/// RM3 produces fractional weights. All weights are > 0.
struct QueryRep {
    std::map<Token, double> terms;

    static QueryRep from_text(std::string_view text) {
        QueryRep q;
        for (auto& t : tokenize(text))
            q.terms[t] += 1.0;
        return q;
    }

    bool empty() const { return terms.empty(); }

    /// Weights scaled to sum 1; empty queries stay empty.
    QueryRep normalized() const {
        double total = 0.0;
        for (auto& [_, w] : terms)
            total += w;
        QueryRep out;
        if (total <= 0.0)
            return out;
        for (auto& [t, w] : terms)
            out.terms[t] = w / total;
        return out;
    }
};

struct ScoredDoc {
    std::string ext_id;
    double score;
};

struct RM3Params {
    std::size_t fb_docs = 10;
    std::size_t fb_terms = 10;
    double orig_weight = 0.5;
};

/// Lucene-flavoured idf: ln(1 + (N - df + 0.5) / (df + 0.5)), positive for
/// every indexed term.
inline double bm25_idf(const InvertedIndex& index, const std::string& term) {
    double n = static_cast<double>(index.n_docs());
    double df = static_cast<double>(index.df(term));
    if (df == 0.0)
        throw std::invalid_argument("term not in index: " + term);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

inline double bm25_term_score(const InvertedIndex& index,
                              const std::string& term, std::uint32_t tf,
                              std::uint32_t doc_ord,
                              const BM25Params& params = {}) {
    double idf = bm25_idf(index, term);
    double dl = static_cast<double>(index.doc_length(doc_ord));
    double norm = params.k1 * (1.0 - params.b + params.b * dl / index.avg_doclen());
    double f = static_cast<double>(tf);
    return idf * f * (params.k1 + 1.0) / (f + norm);
}

namespace detail {

// Shared tie-break: score descending, then ext_id ascending.
inline void sort_scored(std::vector<ScoredDoc>& docs) {
    std::sort(docs.begin(), docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.ext_id < b.ext_id;
    });
}

} // namespace detail

/// BM25 ranked retrieval: scores every document sharing at least one term
/// with the query (full postings scan), returns the top k under the pinned
/// tie-break. Terms absent from the index are skipped.
inline std::vector<ScoredDoc> search(const InvertedIndex& index,
                                     const QueryRep& query, std::size_t k,
                                     const BM25Params& params = {}) {
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& [term, weight] : query.terms) {
        auto posts = index.postings(term);
        if (posts.empty())
            continue;
        double idf = bm25_idf(index, term);
        double k1 = params.k1;
        double b = params.b;
        double avg = index.avg_doclen();
        for (const auto& p : posts) {
            double dl = static_cast<double>(index.doc_length(p.doc_ord));
            double f = static_cast<double>(p.tf);
            double s = idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * dl / avg));
            acc[p.doc_ord] += weight * s;
        }
    }
    std::vector<ScoredDoc> result;
    result.reserve(acc.size());
    for (auto& [ord, score] : acc)
        result.push_back(ScoredDoc{index.ext_id(ord), score});
    detail::sort_scored(result);
    if (result.size() > k)
        result.resize(k);
    return result;
}

/// RM3 pseudo-relevance feedback. Estimates a relevance model over the top
/// fb_docs feedback documents, rm(w) ∝ Σ_d p(w|d)·s(d) with p(w|d) =
/// tf(w,d)/|d| and s(d) the softmax of the feedback BM25 scores, keeps the
/// fb_terms heaviest terms, and interpolates with the normalized original
/// query: orig_weight·q + (1-orig_weight)·rm. Output weights sum to 1.
/// A non-null `skip` drops stopwords from the relevance model (off by
/// default; the expansion terms are measured as-configured).
inline QueryRep rm3_expand(const InvertedIndex& index, const QueryRep& original,
                           const std::vector<ScoredDoc>& feedback,
                           const RM3Params& params,
                           const StopwordList* skip = nullptr) {
    if (feedback.empty())
        throw std::runtime_error("rm3: no feedback documents");
    if (original.empty())
        throw std::runtime_error("rm3: empty original query");

    std::size_t n_fb = std::min(params.fb_docs, feedback.size());

    // Resolve feedback ext_ids to ordinals once.
    std::unordered_map<std::string, std::uint32_t> ord_of;
    for (std::uint32_t ord = 0; ord < index.n_docs(); ++ord)
        ord_of.emplace(index.ext_id(ord), ord);

    std::vector<std::uint32_t> fb_ords;
    std::vector<double> fb_scores;
    for (std::size_t i = 0; i < n_fb; ++i) {
        auto it = ord_of.find(feedback[i].ext_id);
        if (it == ord_of.end())
            throw std::invalid_argument("rm3: feedback document not in index: " +
                                        feedback[i].ext_id);
        fb_ords.push_back(it->second);
        fb_scores.push_back(feedback[i].score);
    }

    // Softmax keeps weights positive and insensitive to the BM25 scale.
    double max_score = *std::max_element(fb_scores.begin(), fb_scores.end());
    double z = 0.0;
    for (double& s : fb_scores) {
        s = std::exp(s - max_score);
        z += s;
    }
    for (double& s : fb_scores)
        s /= z;

    std::map<Token, double> rm;
    for (std::size_t slot = 0; slot < index.terms().size(); ++slot) {
        const auto& term = index.terms()[slot];
        if (skip && skip->contains(term))
            continue;
        auto posts = index.postings_at(slot);
        for (std::size_t i = 0; i < fb_ords.size(); ++i) {
            auto it = std::lower_bound(
                posts.begin(), posts.end(), fb_ords[i],
                [](const Posting& p, std::uint32_t ord) { return p.doc_ord < ord; });
            if (it != posts.end() && it->doc_ord == fb_ords[i]) {
                double dl = static_cast<double>(index.doc_length(fb_ords[i]));
                rm[term] += fb_scores[i] * static_cast<double>(it->tf) / dl;
            }
        }
    }

    // Keep the fb_terms heaviest relevance-model terms (weight desc, term asc).
    std::vector<std::pair<Token, double>> ranked(rm.begin(), rm.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > params.fb_terms)
        ranked.resize(params.fb_terms);
    double rm_total = 0.0;
    for (auto& [_, w] : ranked)
        rm_total += w;

    QueryRep q_hat = original.normalized();
    QueryRep out;
    double ow = params.orig_weight;
    for (auto& [t, w] : q_hat.terms)
        out.terms[t] += ow * w;
    if (rm_total > 0.0 && ow < 1.0) {
        for (auto& [t, w] : ranked)
            out.terms[t] += (1.0 - ow) * (w / rm_total);
    } else if (ow < 1.0) {
        // Degenerate relevance model (no usable terms): keep the original.
        out = q_hat;
    }
    // Drop any zero entries (possible when orig_weight == 0).
    for (auto it = out.terms.begin(); it != out.terms.end();) {
        if (it->second <= 0.0)
            it = out.terms.erase(it);
        else
            ++it;
    }
    return out;
}

/// Two-pass BM25+RM3: first pass at depth max(k, fb_docs) supplies the
/// feedback set; an empty first pass is returned unchanged.
inline std::vector<ScoredDoc> search_rm3(const InvertedIndex& index,
                                         const QueryRep& query, std::size_t k,
                                         const BM25Params& bm25,
                                         const RM3Params& rm3,
                                         const StopwordList* skip = nullptr) {
    auto first = search(index, query, std::max(k, rm3.fb_docs), bm25);
    if (first.empty())
        return first;
    QueryRep expanded = rm3_expand(index, query, first, rm3, skip);
    return search(index, expanded, k, bm25);
}

} // namespace expando
