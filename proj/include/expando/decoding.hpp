#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "expando/binio.hpp"
#include "expando/expansion.hpp"
#include "expando/rng.hpp"
#include "expando/text.hpp"

namespace expando {

/// Next-token distribution given (source document, decoded prefix).
/// Symbol i < |vocab| is vocab()[i]; symbol |vocab| is EOS. For every input
/// the probabilities over vocab ∪ {EOS} sum to 1.
class ConditionalSequenceModel {
  public:
    virtual ~ConditionalSequenceModel() = default;
    virtual const std::vector<Token>& vocab() const = 0;
    virtual std::vector<double> logprob(std::span<const Token> source,
                                        std::span<const Token> prefix) const = 0;
};

/// A completed decode: its logprob includes the terminating EOS step.
struct Hypothesis {
    std::vector<Token> tokens;
    double logprob = 0.0;
};

namespace detail {

// Candidate expansion during beam search: prefix `hyp` extended by `sym`
// (EOS leaves the token sequence as-is and completes it).
struct BeamCandidate {
    std::size_t hyp;
    std::size_t sym; // == vocab size means EOS
    double score;
};

// Lexicographic order of the resulting token sequences, used to break score
// ties deterministically.
inline bool result_seq_less(const std::vector<Token>& a_prefix, const Token* a_tail,
                            const std::vector<Token>& b_prefix, const Token* b_tail) {
    std::size_t an = a_prefix.size() + (a_tail ? 1 : 0);
    std::size_t bn = b_prefix.size() + (b_tail ? 1 : 0);
    std::size_t n = std::min(an, bn);
    for (std::size_t i = 0; i < n; ++i) {
        const Token& at = i < a_prefix.size() ? a_prefix[i] : *a_tail;
        const Token& bt = i < b_prefix.size() ? b_prefix[i] : *b_tail;
        if (at != bt)
            return at < bt;
    }
    return an < bn;
}

inline void sort_hypotheses(std::vector<Hypothesis>& hyps) {
    std::sort(hyps.begin(), hyps.end(), [](const Hypothesis& a, const Hypothesis& b) {
        if (a.logprob != b.logprob)
            return a.logprob > b.logprob;
        return a.tokens < b.tokens;
    });
}

} // namespace detail

/// Standard beam search, no length normalization: at every step all live
/// prefixes are expanded over vocab ∪ {EOS} and the `beam` best candidates
/// by cumulative logprob are kept; an EOS candidate retires as a completed
/// hypothesis. Prefixes reaching max_len are force-terminated with EOS.
/// Zero-probability continuations are discarded. Returns up to `beam`
/// completed hypotheses, best first (ties by token sequence).
inline std::vector<Hypothesis> beam_search(const ConditionalSequenceModel& model,
                                           std::span<const Token> source,
                                           std::size_t beam, std::size_t max_len) {
    if (beam < 1)
        throw std::invalid_argument("beam must be >= 1");
    if (max_len < 1)
        throw std::invalid_argument("max_len must be >= 1");
    const std::size_t eos = model.vocab().size();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<Hypothesis> live{Hypothesis{}};
    std::vector<Hypothesis> completed;

    for (std::size_t step = 0; step < max_len && !live.empty(); ++step) {
        std::vector<std::vector<double>> dists;
        dists.reserve(live.size());
        for (const auto& h : live)
            dists.push_back(model.logprob(source, h.tokens));

        std::vector<detail::BeamCandidate> candidates;
        candidates.reserve(live.size() * (eos + 1));
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (std::size_t s = 0; s <= eos; ++s) {
                double lp = dists[i][s];
                if (lp == neg_inf)
                    continue;
                candidates.push_back({i, s, live[i].logprob + lp});
            }
        }
        auto better = [&](const detail::BeamCandidate& a,
                          const detail::BeamCandidate& b) {
            if (a.score != b.score)
                return a.score > b.score;
            const Token* a_tail = a.sym == eos ? nullptr : &model.vocab()[a.sym];
            const Token* b_tail = b.sym == eos ? nullptr : &model.vocab()[b.sym];
            return detail::result_seq_less(live[a.hyp].tokens, a_tail,
                                           live[b.hyp].tokens, b_tail);
        };
        if (candidates.size() > beam) {
            std::partial_sort(candidates.begin(),
                              candidates.begin() + static_cast<std::ptrdiff_t>(beam),
                              candidates.end(), better);
            candidates.resize(beam);
        } else {
            std::sort(candidates.begin(), candidates.end(), better);
        }

        std::vector<Hypothesis> next;
        next.reserve(beam);
        for (const auto& c : candidates) {
            if (c.sym == eos) {
                completed.push_back(Hypothesis{live[c.hyp].tokens, c.score});
            } else {
                Hypothesis h;
                h.tokens = live[c.hyp].tokens;
                h.tokens.push_back(model.vocab()[c.sym]);
                h.logprob = c.score;
                next.push_back(std::move(h));
            }
        }
        live = std::move(next);
    }

    // Anything still live has hit max_len: force-terminate with EOS.
    for (auto& h : live) {
        double lp = model.logprob(source, h.tokens)[eos];
        if (lp == neg_inf)
            continue;
        completed.push_back(Hypothesis{std::move(h.tokens), h.logprob + lp});
    }

    detail::sort_hypotheses(completed);
    if (completed.size() > beam)
        completed.resize(beam);
    return completed;
}

/// Top-k random sampling: at each step the k most probable symbols (ties by
/// vocab order, EOS last) are renormalized and one is drawn with the seeded
/// SplitMix64 stream. Stops at EOS or max_len (then force-terminated with
/// EOS, as in beam search). Bit-reproducible per (inputs, seed).
inline Hypothesis topk_sample(const ConditionalSequenceModel& model,
                              std::span<const Token> source, std::size_t k,
                              std::size_t max_len, std::uint64_t seed) {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    const std::size_t eos = model.vocab().size();
    const double neg_inf = -std::numeric_limits<double>::infinity();
    SplitMix64 rng(seed);

    Hypothesis hyp;
    while (true) {
        std::vector<double> dist = model.logprob(source, hyp.tokens);
        std::vector<std::size_t> order(eos + 1);
        for (std::size_t i = 0; i <= eos; ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        std::size_t take = std::min(k, order.size());
        order.resize(take);
        while (!order.empty() && dist[order.back()] == neg_inf)
            order.pop_back();
        if (order.empty())
            throw std::runtime_error("topk_sample: no symbol has positive probability");

        // Renormalize the selected symbols (log-sum-exp for stability).
        double max_lp = dist[order.front()];
        double z = 0.0;
        for (auto s : order)
            z += std::exp(dist[s] - max_lp);
        double u = rng.next_double();
        double cum = 0.0;
        std::size_t chosen = order.back();
        for (auto s : order) {
            cum += std::exp(dist[s] - max_lp) / z;
            if (u < cum) {
                chosen = s;
                break;
            }
        }

        if (chosen == eos) {
            hyp.logprob += dist[eos];
            return hyp;
        }
        hyp.logprob += dist[chosen];
        hyp.tokens.push_back(model.vocab()[chosen]);
        if (hyp.tokens.size() >= max_len) {
            hyp.logprob += model.logprob(source, hyp.tokens)[eos];
            return hyp;
        }
    }
}

/// Desk-scale stand-in for a neural query generator: a mixture of a smoothed
/// copy distribution over the source document and a smoothed query bigram
/// model,
///   p(w | source, prev) = mix * p_copy(w | source) + (1-mix) * p_bigram(w | prev),
/// each component add-alpha smoothed over vocab ∪ {EOS}.
class CountSeq2Seq : public ConditionalSequenceModel {
  public:
    CountSeq2Seq(std::vector<Token> vocab,
                 std::unordered_map<std::uint64_t, std::uint64_t> bigram,
                 double mix, double alpha)
        : vocab_(std::move(vocab)), bigram_(std::move(bigram)), mix_(mix),
          alpha_(alpha) {
        if (mix_ < 0.0 || mix_ > 1.0)
            throw std::invalid_argument("mix must be in [0, 1]");
        if (alpha_ <= 0.0)
            throw std::invalid_argument("alpha must be > 0");
        for (std::size_t i = 0; i < vocab_.size(); ++i)
            id_.emplace(vocab_[i], static_cast<std::uint32_t>(i));
        prev_totals_.assign(vocab_.size() + 1, 0);
        for (const auto& [key, count] : bigram_)
            prev_totals_[key / (vocab_.size() + 1)] += count;
    }

    const std::vector<Token>& vocab() const override { return vocab_; }
    double mix() const { return mix_; }
    double alpha() const { return alpha_; }

    std::vector<double> logprob(std::span<const Token> source,
                                std::span<const Token> prefix) const override {
        const std::size_t v = vocab_.size();
        std::vector<double> src_count(v, 0.0);
        double src_total = 0.0;
        for (const auto& t : source) {
            auto it = id_.find(t);
            if (it != id_.end()) {
                src_count[it->second] += 1.0;
                src_total += 1.0;
            }
        }
        std::size_t prev = v; // begin-of-sequence slot
        if (!prefix.empty()) {
            auto it = id_.find(prefix.back());
            if (it == id_.end())
                throw std::invalid_argument("prefix token not in vocabulary: " +
                                            prefix.back());
            prev = it->second;
        }
        double denom_copy = src_total + alpha_ * static_cast<double>(v + 1);
        double denom_bg = static_cast<double>(prev_totals_[prev]) +
                          alpha_ * static_cast<double>(v + 1);
        std::vector<double> out(v + 1);
        for (std::size_t s = 0; s <= v; ++s) {
            double copy_count = s < v ? src_count[s] : 0.0; // EOS never in source
            double p_copy = (copy_count + alpha_) / denom_copy;
            double p_bg = (static_cast<double>(bigram_count(prev, s)) + alpha_) / denom_bg;
            out[s] = std::log(mix_ * p_copy + (1.0 - mix_) * p_bg);
        }
        return out;
    }

    void write(const std::string& path) const;
    static CountSeq2Seq read(const std::string& path);

    /// Bigram key layout: prev * (V+1) + next, prev V = begin, next V = EOS.
    const std::unordered_map<std::uint64_t, std::uint64_t>& bigram() const {
        return bigram_;
    }

  private:
    std::uint64_t bigram_count(std::size_t prev, std::size_t next) const {
        auto it = bigram_.find(static_cast<std::uint64_t>(prev) *
                                   (vocab_.size() + 1) +
                               next);
        return it == bigram_.end() ? 0 : it->second;
    }

    std::vector<Token> vocab_;
    std::unordered_map<Token, std::uint32_t> id_;
    std::unordered_map<std::uint64_t, std::uint64_t> bigram_;
    std::vector<std::uint64_t> prev_totals_;
    double mix_;
    double alpha_;
};

struct TrainingPair {
    std::string query;
    std::string doc_text;
};

/// Fits the count model: vocabulary from both sides of the pairs, bigram
/// table from query token transitions with begin/EOS boundaries. Inputs are
/// clipped to the model token limits (400 for documents, 100 for queries).
inline CountSeq2Seq train_count_model(const std::vector<TrainingPair>& pairs,
                                      double mix = 0.7, double alpha = 0.1) {
    if (pairs.empty())
        throw std::invalid_argument("empty training stream");
    std::vector<Token> vocab;
    {
        std::set<Token> seen;
        for (const auto& p : pairs) {
            for (auto& t : truncate_tokens(tokenize(p.query), kQueryTokenLimit))
                seen.insert(std::move(t));
            for (auto& t : truncate_tokens(tokenize(p.doc_text), kDocTokenLimit))
                seen.insert(std::move(t));
        }
        vocab.assign(seen.begin(), seen.end());
    }
    std::unordered_map<Token, std::uint32_t> id;
    for (std::size_t i = 0; i < vocab.size(); ++i)
        id.emplace(vocab[i], static_cast<std::uint32_t>(i));

    const std::uint64_t stride = vocab.size() + 1;
    const std::uint64_t begin = vocab.size(); // prev slot
    const std::uint64_t eos = vocab.size();   // next slot
    std::unordered_map<std::uint64_t, std::uint64_t> bigram;
    for (const auto& p : pairs) {
        auto toks = truncate_tokens(tokenize(p.query), kQueryTokenLimit);
        std::uint64_t prev = begin;
        for (const auto& t : toks) {
            std::uint64_t next = id.at(t);
            ++bigram[prev * stride + next];
            prev = next;
        }
        ++bigram[prev * stride + eos];
    }
    return CountSeq2Seq(std::move(vocab), std::move(bigram), mix, alpha);
}

// Persisted form, version 1: "XPDM" | u32 version | META | VOCB | GRAM.
// Bigram triples are written in ascending key order so the file is
// deterministic for a given training stream.
inline void CountSeq2Seq::write(const std::string& path) const {
    ByteWriter meta;
    meta.put_f64(mix_);
    meta.put_f64(alpha_);
    meta.put_u64(vocab_.size());
    meta.put_u64(bigram_.size());

    ByteWriter vocb;
    for (const auto& t : vocab_)
        vocb.put_string(t);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(bigram_.begin(),
                                                                 bigram_.end());
    std::sort(entries.begin(), entries.end());
    ByteWriter gram;
    for (const auto& [key, count] : entries) {
        gram.put_varint(key);
        gram.put_varint(count);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open model file for writing: " + path);
    detail::write_file_header(out, "XPDM", 1);
    detail::write_section(out, "META", meta.bytes());
    detail::write_section(out, "VOCB", vocb.bytes());
    detail::write_section(out, "GRAM", gram.bytes());
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline CountSeq2Seq CountSeq2Seq::read(const std::string& path) {
    std::string data = detail::read_entire_file(path);
    ByteReader r(data);
    detail::check_file_header(r, "XPDM", 1, path);
    std::string meta_bytes = detail::read_section(r, "META", path);
    std::string vocb_bytes = detail::read_section(r, "VOCB", path);
    std::string gram_bytes = detail::read_section(r, "GRAM", path);

    ByteReader meta(meta_bytes);
    double mix = meta.get_f64();
    double alpha = meta.get_f64();
    std::uint64_t n_vocab = meta.get_u64();
    std::uint64_t n_bigram = meta.get_u64();

    ByteReader vocb(vocb_bytes);
    std::vector<Token> vocab;
    vocab.reserve(n_vocab);
    for (std::uint64_t i = 0; i < n_vocab; ++i)
        vocab.push_back(vocb.get_string());

    ByteReader gram(gram_bytes);
    std::unordered_map<std::uint64_t, std::uint64_t> bigram;
    bigram.reserve(n_bigram);
    for (std::uint64_t i = 0; i < n_bigram; ++i) {
        std::uint64_t key = gram.get_varint();
        std::uint64_t count = gram.get_varint();
        bigram.emplace(key, count);
    }
    return CountSeq2Seq(std::move(vocab), std::move(bigram), mix, alpha);
}

enum class DecodeMethod { beam, topk };

struct DecodeParams {
    DecodeMethod method = DecodeMethod::topk;
    std::size_t topk = 10;
    std::size_t max_len = 20;
};

/// Adapts a sequence model to the QueryGenerator interface. Beam decoding
/// returns the top-n hypotheses of a single beam=n search; top-k sampling
/// draws n independent queries with seeds seed+0 .. seed+n-1.
class ModelGenerator : public QueryGenerator {
  public:
    ModelGenerator(const ConditionalSequenceModel& model, DecodeParams params)
        : model_(&model), params_(params) {}

    std::vector<std::string> generate(const Document& doc, std::size_t n,
                                      std::uint64_t seed) override {
        auto source = tokenize(doc.text);
        std::vector<std::string> out;
        out.reserve(n);
        if (params_.method == DecodeMethod::beam) {
            auto hyps = beam_search(*model_, source, n, params_.max_len);
            for (std::size_t i = 0; i < std::min(n, hyps.size()); ++i)
                out.push_back(join_tokens(
                    truncate_tokens(std::move(hyps[i].tokens), kQueryTokenLimit)));
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                auto hyp = topk_sample(*model_, source, params_.topk,
                                       params_.max_len, seed + i);
                out.push_back(join_tokens(
                    truncate_tokens(std::move(hyp.tokens), kQueryTokenLimit)));
            }
        }
        return out;
    }

  private:
    const ConditionalSequenceModel* model_;
    DecodeParams params_;
};

/// Training pairs file: one `query<TAB>doc_text` per line.
inline std::vector<TrainingPair> read_pairs_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open pairs file: " + path);
    std::vector<TrainingPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("malformed pairs line " +
                                     std::to_string(line_no) + " in " + path);
        pairs.push_back(TrainingPair{line.substr(0, tab), line.substr(tab + 1)});
    }
    return pairs;
}

} // namespace expando
