#include "snapcorpus/rank/run.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::rank {

namespace {

std::vector<std::string_view> fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn)
{
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        if (!trim(line).empty()) {
            fn(line_no, line);
        }
        start = end + 1;
    }
}

void check_unique(std::set<std::pair<std::string, std::string>>& seen, const std::string& q, const std::string& d,
                  std::size_t line_no)
{
    if (!seen.emplace(q, d).second) {
        throw LineError(line_no, "duplicate entry for query " + q + " document " + d);
    }
}

}  // namespace

std::string format_run_line(const RunEntry& e)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", e.score);
    return e.query_id + " Q0 " + e.doc_id + " " + std::to_string(e.rank) + " " + buf + " " + e.tag;
}

std::string format_qrel_line(const QrelEntry& e)
{
    return e.query_id + " 0 " + e.doc_id + " " + std::to_string(e.relevance);
}

std::vector<RunEntry> parse_run(std::string_view text)
{
    std::vector<RunEntry> out;
    std::set<std::pair<std::string, std::string>> seen;
    for_each_row(text, [&](std::size_t line_no, std::string_view line) {
        auto f = fields(line);
        if (f.size() != 6) {
            throw LineError(line_no, "run row needs 6 fields, found " + std::to_string(f.size()));
        }
        RunEntry e{std::string(f[0]), std::string(f[2]), 0, 0.0, std::string(f[5])};
        if (!parse_number(f[3], e.rank) || e.rank < 1) {
            throw LineError(line_no, "bad rank '" + std::string(f[3]) + "'");
        }
        if (!parse_number(f[4], e.score) || !std::isfinite(e.score)) {
            throw LineError(line_no, "bad score '" + std::string(f[4]) + "'");
        }
        check_unique(seen, e.query_id, e.doc_id, line_no);
        out.push_back(std::move(e));
    });
    return out;
}

std::vector<QrelEntry> parse_qrels(std::string_view text)
{
    std::vector<QrelEntry> out;
    std::set<std::pair<std::string, std::string>> seen;
    for_each_row(text, [&](std::size_t line_no, std::string_view line) {
        auto f = fields(line);
        if (f.size() != 4) {
            throw LineError(line_no, "qrels row needs 4 fields, found " + std::to_string(f.size()));
        }
        QrelEntry e{std::string(f[0]), std::string(f[2]), 0};
        if (!parse_number(f[3], e.relevance) || e.relevance < 0) {
            throw LineError(line_no, "bad relevance '" + std::string(f[3]) + "'");
        }
        check_unique(seen, e.query_id, e.doc_id, line_no);
        out.push_back(std::move(e));
    });
    return out;
}

void write_run(const std::vector<RunEntry>& run, const std::filesystem::path& path)
{
    std::string out;
    for (const auto& e : run) {
        out += format_run_line(e) + "\n";
    }
    write_file_atomic(path, out);
}

std::vector<RunEntry> read_run(const std::filesystem::path& path)
{
    try {
        return parse_run(gzip::read_file(path));
    } catch (const LineError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_qrels(const std::vector<QrelEntry>& qrels, const std::filesystem::path& path)
{
    std::string out;
    for (const auto& e : qrels) {
        out += format_qrel_line(e) + "\n";
    }
    write_file_atomic(path, out);
}

std::vector<QrelEntry> read_qrels(const std::filesystem::path& path)
{
    try {
        return parse_qrels(gzip::read_file(path));
    } catch (const LineError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace snapcorpus::rank
