#pragma once

#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expando/index.hpp"

namespace expando {

/// Corpus file: UTF-8 TSV, one `ext_id<TAB>text` document per line (the
/// MS MARCO collection convention). Text keeps any further tabs verbatim.
inline void for_each_corpus_doc(const std::string& path,
                                const std::function<void(Document&&)>& fn) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open corpus file: " + path);
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
            throw std::runtime_error("malformed corpus line " +
                                     std::to_string(line_no) + " in " + path);
        fn(Document{line.substr(0, tab), line.substr(tab + 1)});
    }
}

inline std::vector<Document> read_corpus_tsv(const std::string& path) {
    std::vector<Document> corpus;
    for_each_corpus_doc(path, [&](Document&& d) { corpus.push_back(std::move(d)); });
    return corpus;
}

/// Query file: UTF-8 TSV, one `qid<TAB>query text` per line.
inline std::vector<std::pair<std::string, std::string>>
read_queries_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open query file: " + path);
    std::vector<std::pair<std::string, std::string>> queries;
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
            throw std::runtime_error("malformed query line " +
                                     std::to_string(line_no) + " in " + path);
        queries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return queries;
}

} // namespace expando
