#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expando/expansion.hpp"
#include "expando/text.hpp"

namespace expando {

/// Relevance judgments: qid -> ext_id -> grade (>= 0, > 0 means relevant).
struct Qrels {
    std::map<std::string, std::map<std::string, int>> by_qid;

    std::size_t n_queries() const { return by_qid.size(); }
};

struct RunEntry {
    std::string ext_id;
    double score;
};

/// Ranked retrieval output per query, in file order. Metric computation
/// re-sorts by (score desc, ext_id asc) rather than trusting stored order.
struct Run {
    std::map<std::string, std::vector<RunEntry>> by_qid;
};

/// Per-query metric values plus their mean over all qrels queries; queries
/// the run misses contribute 0. `warnings` counts queries with no relevant
/// documents in the qrels.
struct MetricReport {
    std::map<std::string, double> per_query;
    double mean = 0.0;
    std::size_t warnings = 0;
};

namespace detail {

inline std::vector<RunEntry> ranked_entries(const Run& run, const std::string& qid) {
    auto it = run.by_qid.find(qid);
    if (it == run.by_qid.end())
        return {};
    std::vector<RunEntry> entries = it->second;
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry& a, const RunEntry& b) {
                         if (a.score != b.score)
                             return a.score > b.score;
                         return a.ext_id < b.ext_id;
                     });
    return entries;
}

inline MetricReport finish_report(MetricReport report) {
    double total = 0.0;
    for (auto& [_, v] : report.per_query)
        total += v;
    report.mean = report.per_query.empty()
                      ? 0.0
                      : total / static_cast<double>(report.per_query.size());
    return report;
}

} // namespace detail

/// Reciprocal rank of the first relevant document within the top k.
inline MetricReport mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k = 10) {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    MetricReport report;
    for (const auto& [qid, judged] : qrels.by_qid) {
        bool any_relevant = false;
        for (auto& [_, g] : judged)
            any_relevant |= g > 0;
        if (!any_relevant)
            ++report.warnings;
        auto entries = detail::ranked_entries(run, qid);
        double value = 0.0;
        for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
            auto it = judged.find(entries[i].ext_id);
            if (it != judged.end() && it->second > 0) {
                value = 1.0 / static_cast<double>(i + 1);
                break;
            }
        }
        report.per_query[qid] = value;
    }
    return detail::finish_report(report);
}

/// Average precision over the top `depth`, grades binarized as grade > 0.
inline MetricReport map_metric(const Run& run, const Qrels& qrels,
                               std::size_t depth = 1000) {
    if (depth < 1)
        throw std::invalid_argument("depth must be >= 1");
    MetricReport report;
    for (const auto& [qid, judged] : qrels.by_qid) {
        std::size_t total_relevant = 0;
        for (auto& [_, g] : judged)
            if (g > 0)
                ++total_relevant;
        if (total_relevant == 0) {
            ++report.warnings;
            report.per_query[qid] = 0.0;
            continue;
        }
        auto entries = detail::ranked_entries(run, qid);
        double sum_prec = 0.0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < entries.size() && i < depth; ++i) {
            auto it = judged.find(entries[i].ext_id);
            if (it != judged.end() && it->second > 0) {
                ++hits;
                sum_prec += static_cast<double>(hits) / static_cast<double>(i + 1);
            }
        }
        report.per_query[qid] = sum_prec / static_cast<double>(total_relevant);
    }
    return detail::finish_report(report);
}

/// Fraction of a query's relevant documents found in the top k.
inline MetricReport recall_at_k(const Run& run, const Qrels& qrels,
                                std::size_t k = 1000) {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    MetricReport report;
    for (const auto& [qid, judged] : qrels.by_qid) {
        std::size_t total_relevant = 0;
        for (auto& [_, g] : judged)
            if (g > 0)
                ++total_relevant;
        if (total_relevant == 0) {
            ++report.warnings;
            report.per_query[qid] = 0.0;
            continue;
        }
        auto entries = detail::ranked_entries(run, qid);
        std::size_t found = 0;
        for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
            auto it = judged.find(entries[i].ext_id);
            if (it != judged.end() && it->second > 0)
                ++found;
        }
        report.per_query[qid] =
            static_cast<double>(found) / static_cast<double>(total_relevant);
    }
    return detail::finish_report(report);
}

/// Standard 6-column TREC format: `qid Q0 ext_id rank score tag`, scores to
/// 6 decimals, one line per retrieved document.
inline void write_run(const std::string& path, const Run& run,
                      const std::string& tag = "expando") {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open run file for writing: " + path);
    char score_buf[64];
    for (const auto& [qid, entries] : run.by_qid) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            std::snprintf(score_buf, sizeof(score_buf), "%.6f", entries[i].score);
            out << qid << " Q0 " << entries[i].ext_id << ' ' << (i + 1) << ' '
                << score_buf << ' ' << tag << '\n';
        }
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline Run read_run(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open run file: " + path);
    Run run;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string qid, q0, ext_id, rank, score_str, tag;
        if (!(ss >> qid >> q0 >> ext_id >> rank >> score_str >> tag))
            throw std::runtime_error("malformed run line " + std::to_string(line_no) +
                                     " in " + path);
        double score;
        try {
            score = std::stod(score_str);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed run line " + std::to_string(line_no) +
                                     " in " + path + ": bad score");
        }
        if (!seen.emplace(qid, ext_id).second)
            throw std::runtime_error("duplicate document " + ext_id + " for query " +
                                     qid + " at run line " + std::to_string(line_no) +
                                     " in " + path);
        run.by_qid[qid].push_back(RunEntry{ext_id, score});
    }
    return run;
}

/// Accepts TREC qrels (`qid 0 ext_id grade`, whitespace separated) and
/// MS MARCO TSV qrels (`qid<TAB>ext_id`, implicit grade 1), detected per line.
inline Qrels read_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open qrels file: " + path);
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::vector<std::string> fields;
        std::string field;
        while (ss >> field)
            fields.push_back(field);
        std::string qid, ext_id;
        int grade = 1;
        if (fields.size() == 4) {
            qid = fields[0];
            ext_id = fields[2];
            try {
                grade = std::stoi(fields[3]);
            } catch (const std::exception&) {
                throw std::runtime_error("malformed qrels line " +
                                         std::to_string(line_no) + " in " + path +
                                         ": bad grade");
            }
            if (grade < 0)
                throw std::runtime_error("malformed qrels line " +
                                         std::to_string(line_no) + " in " + path +
                                         ": negative grade");
        } else if (fields.size() == 2) {
            qid = fields[0];
            ext_id = fields[1];
        } else {
            throw std::runtime_error("malformed qrels line " +
                                     std::to_string(line_no) + " in " + path);
        }
        auto& judged = qrels.by_qid[qid];
        if (!judged.emplace(ext_id, grade).second)
            throw std::runtime_error("duplicate qrels entry for (" + qid + ", " +
                                     ext_id + ") at line " + std::to_string(line_no) +
                                     " in " + path);
    }
    return qrels;
}

/// External score file for the re-rank merge: `qid<TAB>ext_id<TAB>score`.
inline std::map<std::pair<std::string, std::string>, double>
read_scores_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open score file: " + path);
    std::map<std::pair<std::string, std::string>, double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string qid, ext_id, score_str;
        if (!(std::getline(ss, qid, '\t') && std::getline(ss, ext_id, '\t') &&
              std::getline(ss, score_str)))
            throw std::runtime_error("malformed score line " +
                                     std::to_string(line_no) + " in " + path);
        try {
            scores[{qid, ext_id}] = std::stod(score_str);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed score line " +
                                     std::to_string(line_no) + " in " + path +
                                     ": bad score");
        }
    }
    return scores;
}

/// Re-sorts each query's top-`depth` documents by an externally supplied
/// score (the hook a neural re-ranker plugs into). Documents without a score
/// sink below all scored ones, keeping their relative order; positions below
/// `depth` are untouched. The multiset of retrieval scores per query is
/// preserved by reassigning them to the new order, so the run stays a valid
/// non-increasing ranking.
inline Run rerank_merge(const Run& run,
                        const std::map<std::pair<std::string, std::string>, double>& scores,
                        std::size_t depth) {
    Run out;
    for (const auto& [qid, entries] : run.by_qid) {
        std::size_t head = std::min(depth, entries.size());
        std::vector<std::size_t> order(head);
        for (std::size_t i = 0; i < head; ++i)
            order[i] = i;
        auto external = [&](std::size_t i) {
            auto it = scores.find({qid, entries[i].ext_id});
            return it == scores.end()
                       ? -std::numeric_limits<double>::infinity()
                       : it->second;
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return external(a) > external(b);
                         });
        std::vector<RunEntry> merged;
        merged.reserve(entries.size());
        for (std::size_t i = 0; i < head; ++i)
            merged.push_back(RunEntry{entries[order[i]].ext_id, entries[i].score});
        for (std::size_t i = head; i < entries.size(); ++i)
            merged.push_back(entries[i]);
        out.by_qid[qid] = std::move(merged);
    }
    return out;
}

/// Aggregate copied/new/stopword statistics over an expansion file, weighted
/// by token occurrences: stop_frac is over all predicted tokens, copied_frac
/// and new_frac partition the non-stopword tokens. `by_types` switches to
/// counting distinct tokens per document instead of occurrences.
struct ExpansionStats {
    double stop_frac = 0.0;
    double copied_frac = 0.0;
    double new_frac = 0.0;
    std::size_t warnings = 0;
};

inline ExpansionStats expansion_stats(const std::vector<Document>& corpus,
                                      const std::vector<ExpansionRecord>& records,
                                      const StopwordList& stops,
                                      bool by_types = false) {
    std::unordered_map<std::string, const std::string*> text_of;
    for (const auto& d : corpus)
        text_of.emplace(d.ext_id, &d.text);

    std::uint64_t n_stop = 0, n_copied = 0, n_new = 0;
    for (const auto& r : records) {
        auto it = text_of.find(r.ext_id);
        if (it == text_of.end())
            throw std::invalid_argument("expansion record for unknown document: " +
                                        r.ext_id);
        if (by_types) {
            auto part = partition_tokens(*it->second, r.queries, stops);
            n_stop += part.stop.size();
            n_copied += part.copied.size();
            n_new += part.fresh.size();
        } else {
            std::set<Token> doc_tokens;
            for (auto& t : tokenize(*it->second))
                doc_tokens.insert(std::move(t));
            for (const auto& q : r.queries) {
                for (const auto& t : tokenize(q)) {
                    if (stops.contains(t))
                        ++n_stop;
                    else if (doc_tokens.count(t))
                        ++n_copied;
                    else
                        ++n_new;
                }
            }
        }
    }

    ExpansionStats stats;
    std::uint64_t total = n_stop + n_copied + n_new;
    std::uint64_t non_stop = n_copied + n_new;
    if (total == 0) {
        ++stats.warnings;
        return stats;
    }
    stats.stop_frac = static_cast<double>(n_stop) / static_cast<double>(total);
    if (non_stop == 0) {
        ++stats.warnings;
        return stats;
    }
    stats.copied_frac = static_cast<double>(n_copied) / static_cast<double>(non_stop);
    stats.new_frac = static_cast<double>(n_new) / static_cast<double>(non_stop);
    return stats;
}

} // namespace expando
