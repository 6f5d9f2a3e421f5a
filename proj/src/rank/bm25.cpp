#include "snapcorpus/rank/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::rank {

namespace {

std::vector<std::string> unique_terms(const TokenSeq& query)
{
    std::set<std::string> s(query.begin(), query.end());
    return {s.begin(), s.end()};
}

double term_weight(double idf, double tf, double len, double avg, const Bm25Params& p)
{
    double norm = avg > 0 ? len / avg : 0.0;
    return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

bool ranked_before(const std::pair<std::string, double>& x, const std::pair<std::string, double>& y)
{
    return x.second != y.second ? x.second > y.second : x.first > y.first;
}

}  // namespace

void Bm25Params::validate() const
{
    if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
        throw DataError("bm25 parameters out of range: k1 must be >= 0 and b in [0, 1]");
    }
}

std::string Bm25Params::tag() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "bm25-robertson-k1=%g-b=%g", k1, b);
    return buf;
}

double bm25_idf(std::size_t n, std::size_t df)
{
    double v = std::log((static_cast<double>(n) - static_cast<double>(df) + 0.5) / (static_cast<double>(df) + 0.5));
    return std::max(0.0, v);
}

double bm25_score(const TokenSeq& query, const std::string& doc_id, const InvertedIndex& idx, const Bm25Params& p)
{
    auto doc = idx.find_doc(doc_id);
    if (doc < 0) {
        throw DataError("document not in index: " + doc_id);
    }
    auto d = static_cast<std::uint32_t>(doc);
    double len = static_cast<double>(idx.doc_lengths()[d]);
    double score = 0.0;
    for (const auto& t : unique_terms(query)) {
        auto tf = idx.tf(t, d);
        if (tf > 0) {
            score += term_weight(bm25_idf(idx.doc_count(), idx.df(t)), tf, len, idx.avg_doc_length(), p);
        }
    }
    return score;
}

std::vector<RunEntry> rerank(const std::string& query_id, const TokenSeq& query,
                             const std::vector<std::string>& candidates, const InvertedIndex& idx,
                             const Bm25Params& p, const std::string& tag)
{
    std::vector<std::pair<std::string, double>> scored;
    std::set<std::string> seen;
    for (const auto& c : candidates) {
        if (seen.insert(c).second) {
            scored.emplace_back(c, bm25_score(query, c, idx, p));
        }
    }
    std::sort(scored.begin(), scored.end(), ranked_before);
    std::vector<RunEntry> out;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        out.push_back({query_id, scored[i].first, static_cast<int>(i + 1), scored[i].second, tag});
    }
    return out;
}

std::vector<std::pair<std::string, double>> retrieve(const TokenSeq& query, const InvertedIndex& idx, std::size_t k,
                                                     const Bm25Params& p)
{
    std::map<std::uint32_t, double> acc;
    for (const auto& t : unique_terms(query)) {
        const auto* list = idx.postings_for(t);
        if (!list) {
            continue;
        }
        double idf = bm25_idf(idx.doc_count(), list->size());
        for (const auto& post : *list) {
            acc[post.doc] += term_weight(idf, post.tf, static_cast<double>(idx.doc_lengths()[post.doc]),
                                         idx.avg_doc_length(), p);
        }
    }
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [doc, score] : acc) {
        out.emplace_back(idx.doc_ids()[doc], score);
    }
    std::sort(out.begin(), out.end(), ranked_before);
    if (out.size() > k) {
        out.resize(k);
    }
    return out;
}

}  // namespace snapcorpus::rank
