#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "expando/index.hpp"
#include "expando/rng.hpp"
#include "expando/text.hpp"

namespace expando {

/// A document id paired with its predicted queries. A missing record is
/// legal when applying expansions: the document passes through unexpanded.
struct ExpansionRecord {
    std::string ext_id;
    std::vector<std::string> queries;
};

/// Supplies predicted queries for a document. Implementations must be
/// deterministic per (doc, n, seed) and emit queries of at most 100 tokens.
class QueryGenerator {
  public:
    virtual ~QueryGenerator() = default;
    virtual std::vector<std::string> generate(const Document& doc, std::size_t n,
                                              std::uint64_t seed) = 0;
};

constexpr std::size_t kDocTokenLimit = 400;
constexpr std::size_t kQueryTokenLimit = 100;

/// Appends the queries to the document text, single space between pieces,
/// no markup separating original text from predictions.
inline Document expand_document(const Document& doc,
                                const std::vector<std::string>& queries) {
    Document out = doc;
    for (const auto& q : queries) {
        out.text.push_back(' ');
        out.text += q;
    }
    return out;
}

/// Expands every document with n generated queries, preserving corpus order.
/// The generator sees the document truncated to 400 tokens; the text that
/// gets expanded and indexed is the original, untruncated one.
inline std::vector<Document> expand_corpus(const std::vector<Document>& corpus,
                                           QueryGenerator& gen, std::size_t n,
                                           std::uint64_t seed) {
    std::vector<Document> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (n == 0) {
            out.push_back(doc);
            continue;
        }
        Document clipped{doc.ext_id,
                         join_tokens(truncate_tokens(tokenize(doc.text), kDocTokenLimit))};
        std::vector<std::string> queries;
        try {
            queries = gen.generate(clipped, n, seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("expansion failed for document " +
                                     doc.ext_id + ": " + e.what());
        }
        out.push_back(expand_document(doc, queries));
    }
    return out;
}

/// Distinct predicted-query tokens split into stopwords, tokens copied from
/// the document, and new tokens. The three sets are disjoint and cover every
/// distinct predicted token.
struct TokenPartition {
    std::set<Token> copied;
    std::set<Token> fresh;
    std::set<Token> stop;
};

inline TokenPartition partition_tokens(std::string_view doc_text,
                                       const std::vector<std::string>& queries,
                                       const StopwordList& stops) {
    std::set<Token> doc_tokens;
    for (auto& t : tokenize(doc_text))
        doc_tokens.insert(std::move(t));
    TokenPartition part;
    for (const auto& q : queries) {
        for (auto& t : tokenize(q)) {
            if (stops.contains(t))
                part.stop.insert(std::move(t));
            else if (doc_tokens.count(t))
                part.copied.insert(std::move(t));
            else
                part.fresh.insert(std::move(t));
        }
    }
    return part;
}

enum class FilterMode { all, copied_only, new_only };

/// Ablation filter: rewrites each predicted query keeping only tokens of the
/// selected class (stopwords are dropped in both restricted modes); queries
/// left empty are removed. Mode `all` is the identity.
inline ExpansionRecord filter_expansion(const ExpansionRecord& record,
                                        std::string_view doc_text,
                                        const StopwordList& stops,
                                        FilterMode mode) {
    if (mode == FilterMode::all)
        return record;
    std::set<Token> doc_tokens;
    for (auto& t : tokenize(doc_text))
        doc_tokens.insert(std::move(t));
    ExpansionRecord out;
    out.ext_id = record.ext_id;
    for (const auto& q : record.queries) {
        std::vector<Token> kept;
        for (auto& t : tokenize(q)) {
            if (stops.contains(t))
                continue;
            bool in_doc = doc_tokens.count(t) > 0;
            if ((mode == FilterMode::copied_only && in_doc) ||
                (mode == FilterMode::new_only && !in_doc))
                kept.push_back(std::move(t));
        }
        if (!kept.empty())
            out.queries.push_back(join_tokens(kept));
    }
    return out;
}

/// Term-reweighting baseline: each query is up to 5 document tokens sampled
/// without replacement, proportionally to tf, over the document's
/// non-stopword vocabulary. A stopword-only document yields empty queries.
class CopyGenerator : public QueryGenerator {
  public:
    explicit CopyGenerator(StopwordList stops = StopwordList::default_english(),
                           std::size_t query_len = 5)
        : stops_(std::move(stops)), query_len_(query_len) {}

    std::vector<std::string> generate(const Document& doc, std::size_t n,
                                      std::uint64_t seed) override {
        std::map<Token, std::uint32_t> tf;
        for (auto& t : tokenize(doc.text))
            if (!stops_.contains(t))
                ++tf[t];
        std::vector<std::pair<Token, double>> weighted(tf.begin(), tf.end());

        SplitMix64 rng(seed);
        std::vector<std::string> queries;
        queries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto pool = weighted;
            std::vector<Token> picked;
            while (picked.size() < query_len_ && !pool.empty()) {
                double total = 0.0;
                for (auto& [_, w] : pool)
                    total += w;
                double u = rng.next_double() * total;
                std::size_t j = 0;
                double cum = 0.0;
                for (; j < pool.size(); ++j) {
                    cum += pool[j].second;
                    if (u < cum)
                        break;
                }
                if (j >= pool.size())
                    j = pool.size() - 1;
                picked.push_back(pool[j].first);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
            }
            queries.push_back(join_tokens(picked));
        }
        return queries;
    }

  private:
    StopwordList stops_;
    std::size_t query_len_;
};

/// Serves queries precomputed offline (e.g. by an external neural model),
/// keyed by ext_id. Returns the first n stored queries; documents without a
/// record get none, counted in `misses`.
class FileBackedGenerator : public QueryGenerator {
  public:
    explicit FileBackedGenerator(const std::vector<ExpansionRecord>& records) {
        for (const auto& r : records) {
            auto& qs = by_id_[r.ext_id];
            qs.insert(qs.end(), r.queries.begin(), r.queries.end());
        }
    }

    std::vector<std::string> generate(const Document& doc, std::size_t n,
                                      std::uint64_t /*seed*/) override {
        auto it = by_id_.find(doc.ext_id);
        if (it == by_id_.end()) {
            ++misses_;
            return {};
        }
        if (it->second.size() < n)
            ++short_records_;
        std::vector<std::string> out(it->second.begin(),
                                     it->second.begin() +
                                         static_cast<std::ptrdiff_t>(
                                             std::min(n, it->second.size())));
        return out;
    }

    std::size_t misses() const { return misses_; }
    std::size_t short_records() const { return short_records_; }

  private:
    std::unordered_map<std::string, std::vector<std::string>> by_id_;
    std::size_t misses_ = 0;
    std::size_t short_records_ = 0;
};

/// Expansion file: one `ext_id<TAB>query` line per predicted query; multiple
/// lines per ext_id accumulate in file order.
inline std::vector<ExpansionRecord>
read_expansion_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open expansion file: " + path);
    std::vector<ExpansionRecord> records;
    std::unordered_map<std::string, std::size_t> slot;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw std::runtime_error("malformed expansion line " +
                                     std::to_string(line_no) + " in " + path);
        std::string id = line.substr(0, tab);
        std::string query = line.substr(tab + 1);
        auto it = slot.find(id);
        if (it == slot.end()) {
            slot.emplace(id, records.size());
            records.push_back(ExpansionRecord{id, {query}});
        } else {
            records[it->second].queries.push_back(query);
        }
    }
    return records;
}

inline void write_expansion_tsv(const std::string& path,
                                const std::vector<ExpansionRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open expansion file for writing: " + path);
    for (const auto& r : records)
        for (const auto& q : r.queries)
            out << r.ext_id << '\t' << q << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

struct ApplyStats {
    std::size_t expanded = 0;
    std::size_t unexpanded = 0; // documents with no expansion record
};

/// Applies an expansion file to a corpus: every record must name a corpus
/// document; corpus documents without a record pass through unchanged.
inline std::vector<Document>
apply_expansion(const std::vector<Document>& corpus,
                const std::vector<ExpansionRecord>& records,
                ApplyStats* stats = nullptr) {
    std::unordered_map<std::string, const ExpansionRecord*> by_id;
    for (const auto& r : records)
        by_id.emplace(r.ext_id, &r);
    std::unordered_map<std::string, bool> known;
    for (const auto& d : corpus)
        known.emplace(d.ext_id, true);
    for (const auto& r : records)
        if (!known.count(r.ext_id))
            throw std::invalid_argument("expansion record for unknown document: " +
                                        r.ext_id);
    std::vector<Document> out;
    out.reserve(corpus.size());
    ApplyStats local;
    for (const auto& doc : corpus) {
        auto it = by_id.find(doc.ext_id);
        if (it == by_id.end()) {
            ++local.unexpanded;
            out.push_back(doc);
        } else {
            ++local.expanded;
            out.push_back(expand_document(doc, it->second->queries));
        }
    }
    if (stats)
        *stats = local;
    return out;
}

} // namespace expando
