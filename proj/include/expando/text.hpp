#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expando {

/// Lowercase string with no whitespace; the unit every module shares.
using Token = std::string;

namespace detail {

inline bool is_ascii_alnum(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
}

inline char ascii_lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32)
                                  : static_cast<char>(c);
}

} // namespace detail

/// Splits text into lowercased maximal runs of ASCII letters/digits.
/// Every other byte (punctuation, whitespace, multi-byte UTF-8) separates.
inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    Token current;
    for (unsigned char c : text) {
        if (detail::is_ascii_alnum(c)) {
            current.push_back(detail::ascii_lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

/// First min(|tokens|, limit) tokens, order preserved.
inline std::vector<Token> truncate_tokens(std::vector<Token> tokens,
                                   std::size_t limit) {
    if (tokens.size() > limit)
        tokens.resize(limit);
    return tokens;
}

inline std::string join_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i)
            out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

/// Sorted, deduplicated set of stopwords. The default list is the classic
/// 33-word English list so that analysis results are pinned to a versioned
/// artifact input rather than whatever a toolkit happens to bundle.
class StopwordList {
  public:
    StopwordList() = default;

    explicit StopwordList(std::vector<Token> words) : words_(std::move(words)) {
        std::sort(words_.begin(), words_.end());
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    }

    static const StopwordList& default_english() {
        static const StopwordList list{std::vector<Token>{
            "a",    "an",   "and",   "are",  "as",    "at",   "be",
            "but",  "by",   "for",   "if",   "in",    "into", "is",
            "it",   "no",   "not",   "of",   "on",    "or",   "such",
            "that", "the",  "their", "then", "there", "these", "they",
            "this", "to",   "was",   "will", "with"}};
        return list;
    }

    /// One word per line, UTF-8; '#' starts a comment line; blanks ignored.
    static StopwordList from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open stopword file: " + path);
        std::vector<Token> words;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line[0] == '#')
                continue;
            auto toks = tokenize(line);
            words.insert(words.end(), toks.begin(), toks.end());
        }
        return StopwordList(std::move(words));
    }

    bool contains(const Token& t) const {
        return std::binary_search(words_.begin(), words_.end(), t);
    }

    std::size_t size() const { return words_.size(); }
    const std::vector<Token>& words() const { return words_; }

  private:
    std::vector<Token> words_;
};

inline bool is_stopword(const Token& t, const StopwordList& list) {
    return list.contains(t);
}

} // namespace expando
