#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "expando/binio.hpp"
#include "expando/text.hpp"

namespace expando {

struct Document {
    std::string ext_id;
    std::string text;
};

struct Posting {
    std::uint32_t doc_ord; // strictly increasing within a list
    std::uint32_t tf;      // >= 1
};

/// Immutable inverted index: term dictionary, postings, document lengths.
/// Stores exactly what BM25 and RM3 need (tf, df, doclen); no positions.
/// Once built (or loaded) it is read-only and shareable across query threads.
class InvertedIndex {
  public:
    class Builder;

    static InvertedIndex build(const std::vector<Document>& corpus);

    std::size_t n_docs() const { return doclen_.size(); }
    double avg_doclen() const { return avg_doclen_; }
    std::uint64_t total_tokens() const { return total_tokens_; }
    std::size_t n_terms() const { return terms_.size(); }

    std::uint32_t doc_length(std::uint32_t ord) const {
        if (ord >= doclen_.size())
            throw std::out_of_range("document ordinal out of range: " +
                                    std::to_string(ord));
        return doclen_[ord];
    }

    const std::string& ext_id(std::uint32_t ord) const {
        if (ord >= ext_ids_.size())
            throw std::out_of_range("document ordinal out of range: " +
                                    std::to_string(ord));
        return ext_ids_[ord];
    }

    /// Document frequency; 0 for terms the corpus never saw.
    std::size_t df(const std::string& term) const {
        auto i = term_slot(term);
        return i == npos ? 0 : postings_[i].size();
    }

    /// Postings for a term, empty span if absent.
    std::span<const Posting> postings(const std::string& term) const {
        auto i = term_slot(term);
        if (i == npos)
            return {};
        return {postings_[i].data(), postings_[i].size()};
    }

    /// Dictionary terms in lexicographic order.
    const std::vector<std::string>& terms() const { return terms_; }

    std::span<const Posting> postings_at(std::size_t slot) const {
        return {postings_[slot].data(), postings_[slot].size()};
    }

    void write(const std::string& path) const;
    static InvertedIndex read(const std::string& path);

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t term_slot(const std::string& term) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
        if (it == terms_.end() || *it != term)
            return npos;
        return static_cast<std::size_t>(it - terms_.begin());
    }

    std::vector<std::uint32_t> doclen_;
    std::vector<std::string> ext_ids_;
    std::vector<std::string> terms_;            // sorted
    std::vector<std::vector<Posting>> postings_; // parallel to terms_
    std::uint64_t total_tokens_ = 0;
    double avg_doclen_ = 0.0;
};

/// Streaming construction in document-arrival order; ordinals are assigned
/// by add() call order so rebuilds from the same stream are reproducible.
class InvertedIndex::Builder {
  public:
    void add(const Document& doc) {
        if (!seen_ids_.insert(doc.ext_id).second)
            throw std::invalid_argument("duplicate document id: " + doc.ext_id);
        auto tokens = tokenize(doc.text);
        index_.doclen_.push_back(static_cast<std::uint32_t>(tokens.size()));
        index_.ext_ids_.push_back(doc.ext_id);
        index_.total_tokens_ += tokens.size();

        std::unordered_map<std::string, std::uint32_t> tf;
        for (auto& t : tokens)
            ++tf[t];
        for (auto& [term, count] : tf)
            acc_[term].push_back(Posting{ord_, count});
        ++ord_;
    }

    InvertedIndex finish() {
        if (ord_ == 0)
            throw std::invalid_argument("empty corpus: no documents to index");
        index_.avg_doclen_ =
            static_cast<double>(index_.total_tokens_) / static_cast<double>(ord_);
        index_.terms_.reserve(acc_.size());
        for (auto& [term, _] : acc_)
            index_.terms_.push_back(term);
        std::sort(index_.terms_.begin(), index_.terms_.end());
        index_.postings_.reserve(index_.terms_.size());
        for (auto& term : index_.terms_) {
            auto& list = acc_.at(term);
            // add() visits docs in ordinal order, so lists are already sorted
            index_.postings_.push_back(std::move(list));
        }
        return std::move(index_);
    }

  private:
    InvertedIndex index_;
    std::unordered_map<std::string, std::vector<Posting>> acc_;
    std::unordered_set<std::string> seen_ids_;
    std::uint32_t ord_ = 0;
};

inline InvertedIndex InvertedIndex::build(const std::vector<Document>& corpus) {
    Builder b;
    for (const auto& doc : corpus)
        b.add(doc);
    return b.finish();
}

// Persisted form, version 1 (see docs/index-format.md):
//   "XPDI" | u32 version | META | DOCS | DICT | POST
// Postings are delta-encoded varints; the dictionary stores byte offsets
// into the POST payload so the layout is deterministic for a given corpus.
inline void InvertedIndex::write(const std::string& path) const {
    ByteWriter meta;
    meta.put_u64(n_docs());
    meta.put_u64(total_tokens_);

    ByteWriter docs;
    for (auto len : doclen_)
        docs.put_varint(len);
    for (const auto& id : ext_ids_)
        docs.put_string(id);

    ByteWriter post;
    std::vector<std::uint64_t> offsets;
    offsets.reserve(terms_.size());
    for (const auto& list : postings_) {
        offsets.push_back(post.size());
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& p : list) {
            post.put_varint(first ? p.doc_ord : p.doc_ord - prev);
            post.put_varint(p.tf);
            prev = p.doc_ord;
            first = false;
        }
    }

    ByteWriter dict;
    dict.put_varint(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        dict.put_string(terms_[i]);
        dict.put_varint(postings_[i].size());
        dict.put_varint(offsets[i]);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open index file for writing: " + path);
    detail::write_file_header(out, "XPDI", 1);
    detail::write_section(out, "META", meta.bytes());
    detail::write_section(out, "DOCS", docs.bytes());
    detail::write_section(out, "DICT", dict.bytes());
    detail::write_section(out, "POST", post.bytes());
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline InvertedIndex InvertedIndex::read(const std::string& path) {
    std::string data = detail::read_entire_file(path);
    ByteReader r(data);
    detail::check_file_header(r, "XPDI", 1, path);

    std::string meta_bytes = detail::read_section(r, "META", path);
    std::string docs_bytes = detail::read_section(r, "DOCS", path);
    std::string dict_bytes = detail::read_section(r, "DICT", path);
    std::string post_bytes = detail::read_section(r, "POST", path);

    InvertedIndex idx;
    ByteReader meta(meta_bytes);
    std::uint64_t n_docs = meta.get_u64();
    idx.total_tokens_ = meta.get_u64();
    idx.avg_doclen_ = n_docs ? static_cast<double>(idx.total_tokens_) /
                                   static_cast<double>(n_docs)
                             : 0.0;

    ByteReader docs(docs_bytes);
    idx.doclen_.reserve(n_docs);
    for (std::uint64_t i = 0; i < n_docs; ++i)
        idx.doclen_.push_back(static_cast<std::uint32_t>(docs.get_varint()));
    idx.ext_ids_.reserve(n_docs);
    for (std::uint64_t i = 0; i < n_docs; ++i)
        idx.ext_ids_.push_back(docs.get_string());

    ByteReader dict(dict_bytes);
    std::uint64_t n_terms = dict.get_varint();
    idx.terms_.reserve(n_terms);
    idx.postings_.reserve(n_terms);
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        idx.terms_.push_back(dict.get_string());
        std::uint64_t count = dict.get_varint();
        std::uint64_t offset = dict.get_varint();
        if (offset > post_bytes.size())
            throw IoError(IoErrorKind::truncated,
                          "truncated file: postings offset out of range in " + path);
        ByteReader at(std::string_view(post_bytes).substr(offset));
        std::vector<Posting> list;
        list.reserve(count);
        std::uint32_t doc_ord = 0;
        for (std::uint64_t j = 0; j < count; ++j) {
            std::uint32_t gap = static_cast<std::uint32_t>(at.get_varint());
            doc_ord = (j == 0) ? gap : doc_ord + gap;
            auto tf = static_cast<std::uint32_t>(at.get_varint());
            if (tf == 0)
                throw IoError(IoErrorKind::malformed,
                              "malformed postings: zero term frequency in " + path);
            list.push_back(Posting{doc_ord, tf});
        }
        idx.postings_.push_back(std::move(list));
    }
    return idx;
}

} // namespace expando
