#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "snapcorpus/extract/tokenize.hpp"

namespace snapcorpus::diff {

using extract::TokenSeq;

struct Overlap {
    std::size_t intersection = 0;
    std::size_t union_size = 0;
};

/// Set overlap of two token sequences (duplicates ignored).
Overlap token_overlap(const TokenSeq& a, const TokenSeq& b);

/// |A ∩ B| / |A ∪ B| over token sets; 1 when both are empty.
double title_jaccard(const TokenSeq& a, const TokenSeq& b);
double title_jaccard(const std::string& a, const std::string& b);

inline constexpr std::size_t k_buckets = 20;

/// Twenty right-closed bins over [0, 1] (the first also holds 0) plus exact
/// counters. Pairs where both titles are empty are counted separately and
/// kept out of the bins and fractions.
struct JaccardHistogram {
    std::array<std::uint64_t, k_buckets> bins{};
    std::uint64_t pairs = 0;
    std::uint64_t exact_zero = 0;
    std::uint64_t exact_one = 0;
    std::uint64_t at_most_quarter = 0;
    std::uint64_t both_empty = 0;

    void add(const TokenSeq& a, const TokenSeq& b);
    void merge(const JaccardHistogram& o);

    double perfect_fraction() const;
    double le_025_fraction() const;
    double zero_fraction() const;
};

/// Index of the right-closed bin holding intersection/union, computed exactly.
std::size_t bucket_of(const Overlap& o);

JaccardHistogram jaccard_histogram(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs);

/// bucket_low \t bucket_high \t count rows.
std::string format_histogram_tsv(const JaccardHistogram& h);
std::string format_histogram_summary(const JaccardHistogram& h);

}  // namespace snapcorpus::diff
