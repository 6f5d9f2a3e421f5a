#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/session/session.hpp"

namespace snapcorpus::session {

/// One line per query: session_id \t user_id \t split \t query_index \t
/// query_text \t epoch_seconds \t clicks. Clicks are comma-joined
/// "doc_id:item_rank" items; a bare doc_id is accepted on read.
std::string encode_sessions(const std::vector<Session>& sessions);
/// Throws LineError on malformed rows or out-of-order query indexes.
std::vector<Session> decode_sessions(std::string_view text);

void write_sessions(const std::vector<Session>& sessions, const std::filesystem::path& path);
std::vector<Session> read_sessions(const std::filesystem::path& path);

}  // namespace snapcorpus::session
