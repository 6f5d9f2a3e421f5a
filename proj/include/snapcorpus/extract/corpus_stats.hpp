#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "snapcorpus/extract/document.hpp"

namespace snapcorpus::extract {

/// Quartiles use linear interpolation between closest ranks.
struct LengthSummary {
    std::size_t count = 0;
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    std::size_t max = 0;
};

double quantile(const std::vector<std::size_t>& sorted, double q);
LengthSummary summarize_lengths(std::vector<std::size_t> lengths);

struct CorpusStats {
    LengthSummary title_tokens;
    LengthSummary body_tokens;
    std::size_t documents = 0;
    std::size_t excluded = 0;
    std::size_t truncated = 0;
    std::uintmax_t store_bytes = 0;

    double excluded_fraction() const
    {
        auto total = documents + excluded;
        return total == 0 ? 0.0 : static_cast<double>(excluded) / static_cast<double>(total);
    }
};

CorpusStats corpus_stats(const DocStoreReader& store);
std::string format_corpus_stats(const CorpusStats& s);

}  // namespace snapcorpus::extract
