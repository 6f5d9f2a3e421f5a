#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snapcorpus/rank/bm25.hpp"
#include "snapcorpus/rank/run.hpp"
#include "snapcorpus/session/session.hpp"

namespace snapcorpus::session {

inline constexpr std::size_t k_default_depth = 50;

struct CandidateSet {
    std::vector<rank::RunEntry> candidates;  // first-stage order, tag "candidates"
    std::vector<rank::QrelEntry> qrels;      // every candidate, clicked ones graded 1
    std::size_t forced = 0;                  // clicked docs outside the top k
};

/// Top-k BM25 documents plus every clicked document present in the index.
/// Returns nullopt when nothing matches and no clicked document is indexed.
std::optional<CandidateSet> build_candidates(const std::string& query_id, const rank::TokenSeq& query,
                                             const rank::InvertedIndex& idx, const std::set<std::string>& clicked,
                                             std::size_t k = k_default_depth, const rank::Bm25Params& p = {});

struct CandidateStats {
    std::size_t queries = 0;
    std::size_t skipped = 0;           // no match and no indexed click
    std::size_t without_clicks = 0;    // kept, but every label is 0
    std::size_t forced = 0;            // clicked docs added beyond the top k
    std::size_t unindexed_clicks = 0;  // clicked doc ids absent from the index
};

/// Candidates and qrels for every query of the sessions in `split`.
CandidateSet build_split_candidates(const std::vector<Session>& sessions, Split split, const rank::InvertedIndex& idx,
                                    std::size_t k, const rank::Bm25Params& p, CandidateStats* stats = nullptr);

}  // namespace snapcorpus::session
