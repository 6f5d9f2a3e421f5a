#include "snapcorpus/archive/snapshot_dates.hpp"

#include <cstdio>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/timestamp.hpp"

namespace snapcorpus::archive {

SnapshotDates snapshot_dates(const std::vector<ArchiveMapping>& rows)
{
    SnapshotDates d;
    for (const auto& r : rows) {
        if (!parse_ts14(r.timestamp)) {
            throw DataError("invalid snapshot timestamp for " + r.doc_id + ": " + r.timestamp);
        }
        // 14-digit timestamps compare chronologically as strings.
        const std::string& ts = r.timestamp;
        ++d.total;
        ++d.by_month[ts.substr(0, 4) + "-" + ts.substr(4, 2)];
        if (ts < "2006") {
            ++d.before_2006;
        }
        if (ts < "2007") {
            ++d.before_2007;
        }
        if (ts >= "200601" && ts < "200606") {
            ++d.jan_to_may_2006;
        }
    }
    return d;
}

std::string format_snapshot_dates(const SnapshotDates& d)
{
    std::string out = "month\tcount\n";
    for (const auto& [month, n] : d.by_month) {
        out += month + "\t" + std::to_string(n) + "\n";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "# snapshots %zu\n# jan-may 2006 %.4f\n# before 2006 %.4f\n# before 2007 %.4f\n",
                  d.total, d.fraction(d.jan_to_may_2006), d.fraction(d.before_2006), d.fraction(d.before_2007));
    return out + buf;
}

}  // namespace snapcorpus::archive
