#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace snapcorpus {

/// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

/// Parses "YYYY-MM-DD HH:MM:SS". Rejects impossible calendar dates.
std::optional<EpochSeconds> parse_log_time(std::string_view s);
std::string format_log_time(EpochSeconds t);

/// Parses the 14-digit archive form YYYYMMDDhhmmss.
std::optional<EpochSeconds> parse_ts14(std::string_view s);
std::string format_ts14(EpochSeconds t);

/// Parses "YYYY-MM-DD" as midnight UTC.
std::optional<EpochSeconds> parse_date(std::string_view s);

}  // namespace snapcorpus
