#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "snapcorpus/archive/types.hpp"

namespace snapcorpus::archive {

/// Distribution of snapshot dates relative to the log period.
struct SnapshotDates {
    std::size_t total = 0;
    std::map<std::string, std::size_t> by_month;  // "YYYY-MM" -> count
    std::size_t jan_to_may_2006 = 0;
    std::size_t before_2006 = 0;
    std::size_t before_2007 = 0;

    double fraction(std::size_t n) const { return total == 0 ? 0.0 : static_cast<double>(n) / total; }
};

SnapshotDates snapshot_dates(const std::vector<ArchiveMapping>& rows);

/// "month \t count" rows followed by the three summary fractions.
std::string format_snapshot_dates(const SnapshotDates& d);

}  // namespace snapcorpus::archive
