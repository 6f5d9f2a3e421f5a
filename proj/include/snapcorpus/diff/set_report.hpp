#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace snapcorpus::diff {

/// A named set of keys (doc ids or canonical URLs). Construction sorts and
/// removes duplicates.
struct CorpusKeySet {
    CorpusKeySet() = default;
    CorpusKeySet(std::string name, std::vector<std::string> keys);

    std::string name;
    std::vector<std::string> keys;
};

struct SetReport {
    std::string name_a;
    std::string name_b;
    std::size_t universe = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t a_minus_b = 0;
    std::size_t b_minus_a = 0;
    std::size_t union_size = 0;
    std::size_t intersection = 0;

    double percent(std::size_t n) const;
};

/// Throws DataError when universe_size is smaller than the union.
SetReport set_report(const CorpusKeySet& a, const CorpusKeySet& b, std::size_t universe_size);

/// Builds the report from counts alone, for when only the cardinalities are
/// known. Throws DataError on inconsistent counts.
SetReport set_report_from_counts(std::size_t a, std::size_t b, std::size_t intersection, std::size_t universe_size);

/// Rows: label \t count \t percent (one decimal).
std::string format_set_report_tsv(const SetReport& r);
std::string format_set_report_table(const SetReport& r);

}  // namespace snapcorpus::diff
