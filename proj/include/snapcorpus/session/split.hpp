#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/session/session.hpp"

namespace snapcorpus::session {

/// Half-open interval [begin, end) of epoch seconds.
struct DateRange {
    EpochSeconds begin = 0;
    EpochSeconds end = 0;

    bool contains(EpochSeconds t) const { return t >= begin && t < end; }
    bool overlaps(const DateRange& o) const { return begin < o.end && o.begin < end; }
};

/// Parses "YYYY-MM-DD/YYYY-MM-DD" (end exclusive).
DateRange parse_date_range(std::string_view s);
std::string format_date_range(const DateRange& r);

struct SplitSpec {
    DateRange train;
    DateRange dev;
    DateRange test;

    /// Throws DataError when a range is empty or two ranges overlap.
    void validate() const;
};

struct SplitResult {
    std::vector<Session> sessions;  // split assigned; discarded sessions removed
    std::size_t discarded = 0;
};

/// Assigns each session by the timestamp of its first query.
SplitResult split_by_date(std::vector<Session> sessions, const SplitSpec& spec);

struct SplitStats {
    std::size_t sessions = 0;
    std::size_t queries = 0;
    double avg_queries() const { return sessions == 0 ? 0.0 : static_cast<double>(queries) / sessions; }
};

struct DatasetStats {
    SplitStats train;
    SplitStats dev;
    SplitStats test;

    const SplitStats& get(Split s) const;
};

DatasetStats dataset_stats(const std::vector<Session>& sessions);

/// Signed whole-percent change, e.g. "+42 %"; "n/a" when the baseline is 0.
std::string percent_delta(double value, double baseline);

/// Table with one column group per split; with a baseline, each group shows
/// baseline, current and change.
std::string format_dataset_stats(const DatasetStats& s, const std::optional<DatasetStats>& baseline = std::nullopt);

}  // namespace snapcorpus::session
