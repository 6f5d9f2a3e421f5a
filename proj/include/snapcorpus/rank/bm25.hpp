#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "snapcorpus/rank/index.hpp"
#include "snapcorpus/rank/run.hpp"

namespace snapcorpus::rank {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    /// Throws DataError when k1 < 0 or b is outside [0, 1].
    void validate() const;
    /// Run tag naming the variant and parameters, e.g. "bm25-robertson-k1=1.2-b=0.75".
    std::string tag() const;
};

/// ln((N - df + 0.5) / (df + 0.5)), floored at 0.
double bm25_idf(std::size_t n, std::size_t df);

/// Throws DataError when doc_id is not indexed.
double bm25_score(const TokenSeq& query, const std::string& doc_id, const InvertedIndex& idx,
                  const Bm25Params& p = {});

/// Scores candidates and ranks them by score descending, ties by doc_id
/// descending. Ranks run 1..n.
std::vector<RunEntry> rerank(const std::string& query_id, const TokenSeq& query,
                             const std::vector<std::string>& candidates, const InvertedIndex& idx,
                             const Bm25Params& p = {}, const std::string& tag = "bm25");

/// Top-k documents sharing at least one term with the query, in rerank order.
std::vector<std::pair<std::string, double>> retrieve(const TokenSeq& query, const InvertedIndex& idx, std::size_t k,
                                                     const Bm25Params& p = {});

}  // namespace snapcorpus::rank
