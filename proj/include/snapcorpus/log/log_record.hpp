#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "snapcorpus/common/timestamp.hpp"

namespace snapcorpus::log {

/// A click (or an empty result page visit when absent) attached to a query row.
struct Click {
    std::uint32_t item_rank = 0;
    std::string url;

    bool operator==(const Click&) const = default;
};

/// One row of a click log: user, query, time, and an optional click.
struct LogRecord {
    std::string user_id;
    std::string query_text;
    EpochSeconds query_time = 0;
    std::optional<Click> click;

    bool operator==(const LogRecord&) const = default;
};

/// Header rows and blank lines.
struct SkipLine {};

struct LineIssue {
    std::size_t line = 0;
    std::string message;
};

using ParsedLine = std::variant<LogRecord, SkipLine, LineIssue>;

ParsedLine parse_log_line(std::string_view line, std::size_t line_number = 0);

/// Inverse of parse_log_line for a record; rows without a click keep the
/// trailing empty columns so the file stays rectangular.
std::string format_log_line(const LogRecord& r);

inline constexpr std::string_view k_log_header = "AnonID\tQuery\tQueryTime\tItemRank\tClickURL";

struct ReadStats {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t skipped = 0;
    std::size_t malformed = 0;
    /// First few issues, for reporting. `malformed` holds the full count.
    std::vector<std::pair<std::string, LineIssue>> samples;

    void merge(const ReadStats& other);
};

/// Streams all records of one log file (plain or gzip). Malformed lines are
/// counted in the returned stats and never abort the scan.
ReadStats read_log_file(const std::filesystem::path& path,
                        const std::function<void(LogRecord&&)>& sink);

/// Lists log files in a directory (or returns the path itself when it is a
/// file), sorted by name.
std::vector<std::filesystem::path> list_log_files(const std::filesystem::path& path);

}  // namespace snapcorpus::log
