#include "snapcorpus/session/session.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::session {

std::string to_string(Split s)
{
    switch (s) {
    case Split::train:
        return "train";
    case Split::dev:
        return "dev";
    case Split::test:
        return "test";
    case Split::none:
        break;
    }
    return "none";
}

Split parse_split(std::string_view s)
{
    if (s == "train") {
        return Split::train;
    }
    if (s == "dev") {
        return Split::dev;
    }
    if (s == "test") {
        return Split::test;
    }
    if (s == "none") {
        return Split::none;
    }
    throw DataError("unknown split '" + std::string(s) + "'");
}

std::vector<Session> segment(const std::vector<log::LogRecord>& records, EpochSeconds gap_seconds,
                             const ClickResolver& resolve, SegmentStats* stats)
{
    if (gap_seconds <= 0) {
        throw DataError("session gap must be positive");
    }
    SegmentStats local;
    std::vector<Session> out;
    std::unordered_set<std::string> finished_users;
    const log::LogRecord* prev = nullptr;
    std::size_t user_sessions = 0;

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        ++local.records;
        bool new_user = !prev || prev->user_id != r.user_id;
        if (new_user) {
            if (prev) {
                finished_users.insert(prev->user_id);
            }
            if (finished_users.count(r.user_id)) {
                throw DataError("records are not grouped by user: user " + r.user_id + " reappears at record " +
                                std::to_string(i + 1));
            }
            user_sessions = 0;
        } else if (r.query_time < prev->query_time) {
            throw DataError("records are not sorted by time: user " + r.user_id + " goes back in time at record " +
                            std::to_string(i + 1));
        }
        if (new_user || r.query_time - prev->query_time >= gap_seconds) {
            Session s;
            s.user_id = r.user_id;
            s.session_id = r.user_id + "-" + std::to_string(user_sessions++);
            out.push_back(std::move(s));
        }
        auto& queries = out.back().queries;
        if (!queries.empty() && queries.back().query_text == r.query_text) {
            ++local.merged_duplicates;
        } else {
            queries.push_back({r.query_text, r.query_time, {}});
        }
        if (r.click) {
            auto doc = resolve ? resolve(r.click->url) : std::nullopt;
            if (!doc) {
                ++local.unresolved_clicks;
            } else {
                auto& clicks = queries.back().clicks;
                bool seen = std::any_of(clicks.begin(), clicks.end(), [&](const auto& c) { return c.doc_id == *doc; });
                if (!seen) {
                    clicks.push_back({*doc, r.click->item_rank});
                }
            }
        }
        prev = &r;
    }
    local.sessions = out.size();
    if (stats) {
        *stats = local;
    }
    return out;
}

std::size_t distinct_queries(const Session& s)
{
    std::set<std::string> texts;
    for (const auto& q : s.queries) {
        texts.insert(q.query_text);
    }
    return texts.size();
}

std::vector<Session> filter_sessions(std::vector<Session> sessions, std::size_t min_queries, std::size_t* dropped)
{
    auto keep_end = std::stable_partition(sessions.begin(), sessions.end(),
                                          [&](const Session& s) { return distinct_queries(s) >= min_queries; });
    if (dropped) {
        *dropped = static_cast<std::size_t>(sessions.end() - keep_end);
    }
    sessions.erase(keep_end, sessions.end());
    return sessions;
}

}  // namespace snapcorpus::session
