#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expando/eval.hpp"
#include "expando/index.hpp"
#include "expando/retrieval.hpp"

namespace expando {

/// Retrieves every query against the index and assembles a Run. RM3 is
/// applied when params are supplied. Queries that tokenize to nothing (or
/// match nothing) produce an empty result list, not an error.
inline Run run_search(const InvertedIndex& index,
                      const std::vector<std::pair<std::string, std::string>>& queries,
                      std::size_t k, const BM25Params& bm25,
                      const std::optional<RM3Params>& rm3 = std::nullopt,
                      const StopwordList* rm3_skip = nullptr) {
    Run run;
    for (const auto& [qid, text] : queries) {
        QueryRep query = QueryRep::from_text(text);
        std::vector<ScoredDoc> hits;
        if (!query.empty()) {
            hits = rm3 ? search_rm3(index, query, k, bm25, *rm3, rm3_skip)
                       : search(index, query, k, bm25);
        }
        auto& entries = run.by_qid[qid];
        entries.reserve(hits.size());
        for (auto& h : hits)
            entries.push_back(RunEntry{std::move(h.ext_id), h.score});
    }
    return run;
}

} // namespace expando
