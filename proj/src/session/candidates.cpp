#include "snapcorpus/session/candidates.hpp"

#include <algorithm>

#include "snapcorpus/extract/tokenize.hpp"

namespace snapcorpus::session {

std::optional<CandidateSet> build_candidates(const std::string& query_id, const rank::TokenSeq& query,
                                             const rank::InvertedIndex& idx, const std::set<std::string>& clicked,
                                             std::size_t k, const rank::Bm25Params& p)
{
    auto top = rank::retrieve(query, idx, k, p);
    std::set<std::string> chosen;
    for (const auto& [doc, score] : top) {
        chosen.insert(doc);
    }
    bool any_click = false;
    std::size_t forced = 0;
    for (const auto& c : clicked) {
        if (idx.find_doc(c) < 0) {
            continue;
        }
        any_click = true;
        if (chosen.insert(c).second) {
            top.emplace_back(c, rank::bm25_score(query, c, idx, p));
            ++forced;
        }
    }
    if (top.empty() && !any_click) {
        return std::nullopt;
    }
    CandidateSet out;
    out.forced = forced;
    for (std::size_t i = 0; i < top.size(); ++i) {
        out.candidates.push_back({query_id, top[i].first, static_cast<int>(i + 1), top[i].second, "candidates"});
    }
    std::vector<std::string> ids(chosen.begin(), chosen.end());
    for (const auto& d : ids) {
        out.qrels.push_back({query_id, d, clicked.count(d) ? 1 : 0});
    }
    return out;
}

CandidateSet build_split_candidates(const std::vector<Session>& sessions, Split split, const rank::InvertedIndex& idx,
                                    std::size_t k, const rank::Bm25Params& p, CandidateStats* stats)
{
    CandidateStats local;
    CandidateSet all;
    for (const auto& s : sessions) {
        if (s.split != split) {
            continue;
        }
        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            const auto& q = s.queries[i];
            ++local.queries;
            std::set<std::string> clicked;
            for (const auto& c : q.clicks) {
                clicked.insert(c.doc_id);
                local.unindexed_clicks += idx.find_doc(c.doc_id) < 0;
            }
            auto set = build_candidates(s.query_id(i), extract::tokenize(q.query_text), idx, clicked, k, p);
            if (!set) {
                ++local.skipped;
                continue;
            }
            std::size_t relevant = 0;
            for (const auto& e : set->qrels) {
                relevant += e.relevance > 0;
            }
            local.without_clicks += relevant == 0;
            local.forced += set->forced;
            all.candidates.insert(all.candidates.end(), set->candidates.begin(), set->candidates.end());
            all.qrels.insert(all.qrels.end(), set->qrels.begin(), set->qrels.end());
        }
    }
    if (stats) {
        *stats = local;
    }
    return all;
}

}  // namespace snapcorpus::session
