#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace snapcorpus::archive {

inline constexpr std::string_view k_default_target = "20060301000000";
inline constexpr std::string_view k_default_endpoint = "https://archive.org/wayback/available";

/// The capture the availability service reports as closest to a target date.
struct Snapshot {
    std::string archive_url;
    std::string timestamp;  // YYYYMMDDhhmmss
    int http_status = 0;
    bool available = false;

    bool operator==(const Snapshot&) const = default;
};

/// A distributable row linking a document id to the capture it came from.
struct ArchiveMapping {
    std::string doc_id;
    std::string original_url;
    std::string timestamp;
    std::string archive_url;

    bool operator==(const ArchiveMapping&) const = default;
    auto operator<=>(const ArchiveMapping&) const = default;
};

struct FetchPolicy {
    std::string target_timestamp{k_default_target};
    unsigned max_concurrency = 4;
    std::chrono::milliseconds min_request_interval_per_host{1000};
    unsigned max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds request_timeout{30000};
    /// Wall-clock cap on all attempts for a single URL.
    std::chrono::milliseconds per_url_budget{300000};
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

}  // namespace snapcorpus::archive
