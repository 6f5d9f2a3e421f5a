#include "snapcorpus/session/session_file.hpp"

#include <charconv>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::session {

namespace {

template <typename T>
bool parse_int(std::string_view s, T& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

}  // namespace

std::string encode_sessions(const std::vector<Session>& sessions)
{
    std::string out;
    for (const auto& s : sessions) {
        for (std::size_t i = 0; i < s.queries.size(); ++i) {
            const auto& q = s.queries[i];
            std::string clicks;
            for (const auto& c : q.clicks) {
                if (c.doc_id.find_first_of(",:\t\n") != std::string::npos) {
                    throw DataError("doc id not representable in a session file: " + c.doc_id);
                }
                clicks += (clicks.empty() ? "" : ",") + c.doc_id + ":" + std::to_string(c.item_rank);
            }
            out += escape_tsv(s.session_id) + "\t" + escape_tsv(s.user_id) + "\t" + to_string(s.split) + "\t" +
                   std::to_string(i) + "\t" + escape_tsv(q.query_text) + "\t" + std::to_string(q.query_time) +
                   "\t" + clicks + "\n";
        }
    }
    return out;
}

std::vector<Session> decode_sessions(std::string_view text)
{
    std::vector<Session> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 7) {
            throw LineError(line_no, "session row needs 7 fields, found " + std::to_string(f.size()));
        }
        std::size_t index = 0;
        SessionQuery q;
        q.query_text = unescape_tsv(f[4]);
        if (!parse_int(f[3], index)) {
            throw LineError(line_no, "bad query index '" + std::string(f[3]) + "'");
        }
        if (!parse_int(f[5], q.query_time)) {
            throw LineError(line_no, "bad epoch seconds '" + std::string(f[5]) + "'");
        }
        if (!f[6].empty()) {
            for (auto item : split(f[6], ',')) {
                SessionClick c;
                auto colon = item.find(':');
                c.doc_id = std::string(item.substr(0, colon));
                if (colon != std::string_view::npos && !parse_int(item.substr(colon + 1), c.item_rank)) {
                    throw LineError(line_no, "bad click '" + std::string(item) + "'");
                }
                if (c.doc_id.empty()) {
                    throw LineError(line_no, "empty doc id in clicks");
                }
                q.clicks.push_back(std::move(c));
            }
        }
        Split sp;
        try {
            sp = parse_split(f[2]);
        } catch (const DataError& e) {
            throw LineError(line_no, e.what());
        }
        auto session_id = unescape_tsv(f[0]);
        if (index == 0) {
            Session s;
            s.session_id = session_id;
            s.user_id = unescape_tsv(f[1]);
            s.split = sp;
            out.push_back(std::move(s));
        } else if (out.empty() || out.back().session_id != session_id || out.back().queries.size() != index) {
            throw LineError(line_no, "query index " + std::to_string(index) + " out of sequence for session " +
                                         session_id);
        }
        out.back().queries.push_back(std::move(q));
    }
    return out;
}

void write_sessions(const std::vector<Session>& sessions, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_sessions(sessions));
}

std::vector<Session> read_sessions(const std::filesystem::path& path)
{
    try {
        return decode_sessions(gzip::read_file(path));
    } catch (const LineError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace snapcorpus::session
