#include "snapcorpus/log/log_record.hpp"

#include <algorithm>
#include <charconv>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::log {

namespace {

constexpr std::size_t k_max_samples = 20;

bool is_header(const std::vector<std::string_view>& fields)
{
    return fields.size() >= 3 && fields[0] == "AnonID" && fields[1] == "Query";
}

}  // namespace

ParsedLine parse_log_line(std::string_view line, std::size_t line_number)
{
    if (trim(line).empty()) {
        return SkipLine{};
    }
    auto fields = split(line, '\t');
    if (is_header(fields)) {
        return SkipLine{};
    }
    if (fields.size() != 3 && fields.size() != 5) {
        return LineIssue{line_number, "expected 3 or 5 tab-separated fields, got " +
                                          std::to_string(fields.size())};
    }
    LogRecord r;
    r.user_id = std::string(fields[0]);
    r.query_text = std::string(fields[1]);
    if (r.user_id.empty()) {
        return LineIssue{line_number, "empty user id"};
    }
    auto t = parse_log_time(fields[2]);
    if (!t) {
        return LineIssue{line_number, "malformed timestamp '" + std::string(fields[2]) + "'"};
    }
    r.query_time = *t;
    if (fields.size() == 5) {
        auto rank_field = fields[3];
        auto url_field = fields[4];
        if (rank_field.empty() != url_field.empty()) {
            return LineIssue{line_number, "item rank and click url must both be present or absent"};
        }
        if (!rank_field.empty()) {
            std::uint32_t rank = 0;
            auto [ptr, ec] = std::from_chars(rank_field.data(), rank_field.data() + rank_field.size(), rank);
            if (ec != std::errc{} || ptr != rank_field.data() + rank_field.size() || rank == 0) {
                return LineIssue{line_number, "non-integer item rank '" + std::string(rank_field) + "'"};
            }
            r.click = Click{rank, std::string(url_field)};
        }
    }
    return r;
}

std::string format_log_line(const LogRecord& r)
{
    std::string out = r.user_id + '\t' + r.query_text + '\t' + format_log_time(r.query_time);
    if (r.click) {
        out += '\t' + std::to_string(r.click->item_rank) + '\t' + r.click->url;
    } else {
        out += "\t\t";
    }
    return out;
}

void ReadStats::merge(const ReadStats& other)
{
    lines += other.lines;
    records += other.records;
    skipped += other.skipped;
    malformed += other.malformed;
    for (const auto& s : other.samples) {
        if (samples.size() >= k_max_samples) {
            break;
        }
        samples.push_back(s);
    }
}

ReadStats read_log_file(const std::filesystem::path& path,
                        const std::function<void(LogRecord&&)>& sink)
{
    ReadStats stats;
    std::size_t line_no = 0;
    gzip::for_each_line(path, [&](std::string_view line) {
        ++line_no;
        ++stats.lines;
        auto parsed = parse_log_line(line, line_no);
        if (auto* rec = std::get_if<LogRecord>(&parsed)) {
            ++stats.records;
            sink(std::move(*rec));
        } else if (std::holds_alternative<SkipLine>(parsed)) {
            ++stats.skipped;
        } else {
            ++stats.malformed;
            if (stats.samples.size() < k_max_samples) {
                stats.samples.emplace_back(path.filename().string(), std::get<LineIssue>(parsed));
            }
        }
    });
    return stats;
}

std::vector<std::filesystem::path> list_log_files(const std::filesystem::path& path)
{
    namespace fs = std::filesystem;
    if (!fs::exists(path)) {
        throw DataError("log path does not exist: " + path.string());
    }
    if (fs::is_regular_file(path)) {
        return {path};
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace snapcorpus::log
