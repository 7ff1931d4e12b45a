#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "expando/decoding.hpp"
#include "expando/retrieval.hpp"

namespace expando {

/// Every knob of the pipeline with its documented default. Values from a
/// config file are applied first; command-line flags override them. The
/// effective config is echoed next to each output so a run can be replayed.
struct Config {
    BM25Params bm25;
    RM3Params rm3;
    bool use_rm3 = false;
    bool use_expansion = false;
    DecodeParams decode;
    std::size_t num_queries = 10; // queries appended per document
    std::uint64_t seed = 0;
    std::size_t k = 1000; // retrieval depth
    double mix = 0.7;     // count-model copy weight
    double alpha = 0.1;   // count-model smoothing

    void set(const std::string& key, const std::string& value);
    std::string to_toml() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline std::string unquote(std::string s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw std::runtime_error("config key " + key + ": expected bool, got " + value);
}

} // namespace detail

inline void Config::set(const std::string& key, const std::string& value) {
    try {
        if (key == "k1")
            bm25.k1 = std::stod(value);
        else if (key == "b")
            bm25.b = std::stod(value);
        else if (key == "fb_docs")
            rm3.fb_docs = std::stoul(value);
        else if (key == "fb_terms")
            rm3.fb_terms = std::stoul(value);
        else if (key == "orig_weight")
            rm3.orig_weight = std::stod(value);
        else if (key == "use_rm3")
            use_rm3 = detail::parse_bool(key, value);
        else if (key == "use_expansion")
            use_expansion = detail::parse_bool(key, value);
        else if (key == "method") {
            if (value == "beam")
                decode.method = DecodeMethod::beam;
            else if (value == "topk")
                decode.method = DecodeMethod::topk;
            else
                throw std::runtime_error("config key method: expected beam or topk");
        } else if (key == "topk")
            decode.topk = std::stoul(value);
        else if (key == "max_len")
            decode.max_len = std::stoul(value);
        else if (key == "num_queries")
            num_queries = std::stoul(value);
        else if (key == "seed")
            seed = std::stoull(value);
        else if (key == "k")
            k = std::stoul(value);
        else if (key == "mix")
            mix = std::stod(value);
        else if (key == "alpha")
            alpha = std::stod(value);
        else
            throw std::runtime_error("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("config key " + key + ": bad value " + value);
    } catch (const std::out_of_range&) {
        throw std::runtime_error("config key " + key + ": value out of range");
    }
}

inline std::string Config::to_toml() const {
    std::ostringstream out;
    out << "k1 = " << bm25.k1 << "\n"
        << "b = " << bm25.b << "\n"
        << "fb_docs = " << rm3.fb_docs << "\n"
        << "fb_terms = " << rm3.fb_terms << "\n"
        << "orig_weight = " << rm3.orig_weight << "\n"
        << "use_rm3 = " << (use_rm3 ? "true" : "false") << "\n"
        << "use_expansion = " << (use_expansion ? "true" : "false") << "\n"
        << "method = \"" << (decode.method == DecodeMethod::beam ? "beam" : "topk")
        << "\"\n"
        << "topk = " << decode.topk << "\n"
        << "max_len = " << decode.max_len << "\n"
        << "num_queries = " << num_queries << "\n"
        << "seed = " << seed << "\n"
        << "k = " << k << "\n"
        << "mix = " << mix << "\n"
        << "alpha = " << alpha << "\n";
    return out.str();
}

/// TOML-style `key = value` lines; '#' starts a comment; blank lines skipped.
inline Config load_config(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed config line " +
                                     std::to_string(line_no) + " in " + path);
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::unquote(detail::trim(line.substr(eq + 1)));
        base.set(key, value);
    }
    return base;
}

/// Writes the effective config next to `output_path` as
/// `<output_path>.config.toml`.
inline void echo_config(const std::string& output_path, const Config& config) {
    std::string path = output_path + ".config.toml";
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write effective config: " + path);
    out << config.to_toml();
}

} // namespace expando
