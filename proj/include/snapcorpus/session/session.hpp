#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/common/timestamp.hpp"
#include "snapcorpus/log/log_record.hpp"

namespace snapcorpus::session {

struct SessionClick {
    std::string doc_id;
    std::uint32_t item_rank = 0;  // 0 when unknown

    bool operator==(const SessionClick&) const = default;
};

struct SessionQuery {
    std::string query_text;
    EpochSeconds query_time = 0;
    std::vector<SessionClick> clicks;

    bool operator==(const SessionQuery&) const = default;
};

enum class Split { none, train, dev, test };

std::string to_string(Split s);
/// Throws DataError for anything other than train, dev, test or none.
Split parse_split(std::string_view s);

struct Session {
    std::string session_id;  // "<user_id>-<n>", n counting the user's sessions from 0
    std::string user_id;
    std::vector<SessionQuery> queries;
    Split split = Split::none;

    bool operator==(const Session&) const = default;
    /// Query identifier used in run and qrels files.
    std::string query_id(std::size_t index) const { return session_id + "_" + std::to_string(index); }
};

/// Maps a click URL to a corpus doc id; nullopt drops the click.
using ClickResolver = std::function<std::optional<std::string>(const std::string& url)>;

struct SegmentStats {
    std::size_t records = 0;
    std::size_t sessions = 0;
    std::size_t merged_duplicates = 0;  // rows folded into the previous query
    std::size_t unresolved_clicks = 0;
};

/// Splits records into sessions. Records must be grouped by user and sorted
/// by time within each user; a record whose gap from the user's previous
/// record is >= gap_seconds starts a new session. Consecutive rows with the
/// same query text in one session become one query with the union of their
/// clicks. Throws DataError on unsorted input.
std::vector<Session> segment(const std::vector<log::LogRecord>& records, EpochSeconds gap_seconds,
                             const ClickResolver& resolve, SegmentStats* stats = nullptr);

std::size_t distinct_queries(const Session& s);

/// Keeps sessions with at least min_queries distinct query texts.
std::vector<Session> filter_sessions(std::vector<Session> sessions, std::size_t min_queries = 2,
                                     std::size_t* dropped = nullptr);

}  // namespace snapcorpus::session
