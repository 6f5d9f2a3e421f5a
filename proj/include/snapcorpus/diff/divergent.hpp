#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snapcorpus/extract/document.hpp"

namespace snapcorpus::diff {

struct TitlePair {
    std::string doc_id;
    std::string title_a;
    std::string title_b;
};

/// Pairs for doc ids present in both exports, ordered by doc id.
std::vector<TitlePair> join_titles(const std::vector<extract::TitleRow>& a, const std::vector<extract::TitleRow>& b);

struct ReviewRow {
    std::string doc_id;
    std::string title_a;
    std::string title_b;
    double jaccard = 0.0;
};

struct DivergentSample {
    std::size_t population = 0;  // pairs with J <= threshold
    std::vector<ReviewRow> rows;  // ordered by doc id
};

/// Uniform sample of k pairs whose Jaccard is at most `threshold`. Selection
/// keys on a seeded hash of the doc id, so it does not depend on input order.
/// Throws DataError when fewer than k pairs qualify.
DivergentSample sample_divergent(const std::vector<TitlePair>& pairs, std::size_t k, std::uint64_t seed,
                                 double threshold);

/// doc_id \t title_a \t title_b \t jaccard review sheet with a header.
std::string format_review_sheet(const DivergentSample& s);

}  // namespace snapcorpus::diff
