#include "snapcorpus/archive/journal.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::archive {

namespace {

constexpr std::pair<Disposition, std::string_view> k_names[] = {
    {Disposition::located, "located"},         {Disposition::no_snapshot, "no-snapshot"},
    {Disposition::failed, "failed"},           {Disposition::deferred, "deferred"},
    {Disposition::fetched, "fetched"},         {Disposition::unrecoverable, "unrecoverable"},
    {Disposition::deleted, "deleted"},
};

std::string_view or_dash(const std::string& s) { return s.empty() ? std::string_view("-") : s; }

std::string from_dash(std::string_view s) { return s == "-" ? std::string{} : std::string(s); }

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::optional<JournalEntry> parse_line(std::string_view line)
{
    auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
        return std::nullopt;
    }
    auto body = line.substr(0, tab);
    if (crc32_hex(body) != line.substr(tab + 1)) {
        return std::nullopt;
    }
    auto f = split(body, '\t');
    if (f.size() != 7) {
        return std::nullopt;
    }
    JournalEntry e;
    e.url = std::string(f[0]);
    auto d = parse_disposition(f[1]);
    if (!d || e.url.empty() || !parse_number(f[2], e.attempts) || !parse_number(f[5], e.bytes) ||
        !parse_number(f[6], e.elapsed_ms)) {
        return std::nullopt;
    }
    e.disposition = *d;
    e.timestamp = from_dash(f[3]);
    e.archive_url = from_dash(f[4]);
    return e;
}

}  // namespace

std::string_view to_string(Disposition d)
{
    for (const auto& [k, v] : k_names) {
        if (k == d) {
            return v;
        }
    }
    return "?";
}

std::optional<Disposition> parse_disposition(std::string_view s)
{
    for (const auto& [k, v] : k_names) {
        if (v == s) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_terminal(Disposition d) { return d != Disposition::deferred; }

std::string format_journal_line(const JournalEntry& e)
{
    std::ostringstream body;
    body << e.url << '\t' << to_string(e.disposition) << '\t' << e.attempts << '\t'
         << or_dash(e.timestamp) << '\t' << or_dash(e.archive_url) << '\t' << e.bytes << '\t'
         << e.elapsed_ms;
    auto b = body.str();
    return b + '\t' + crc32_hex(b);
}

Journal read_journal(const std::filesystem::path& path)
{
    Journal j;
    if (!std::filesystem::exists(path)) {
        return j;
    }
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    auto lines = split(text, '\n');
    bool ends_with_newline = !text.empty() && text.back() == '\n';
    if (ends_with_newline) {
        lines.pop_back();
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        bool is_last = i + 1 == lines.size();
        auto entry = parse_line(lines[i]);
        if (!entry || (is_last && !ends_with_newline)) {
            if (is_last) {
                j.dropped_partial_tail = true;
                break;
            }
            throw LineError(i + 1, "corrupted journal entry in " + path.string());
        }
        ++j.lines;
        j.latest[entry->url] = std::move(*entry);
    }
    return j;
}

std::vector<std::string> resume_crawl(const Journal& journal, const std::vector<std::string>& urls)
{
    std::vector<std::string> plan;
    for (const auto& u : urls) {
        auto it = journal.latest.find(u);
        if (it == journal.latest.end() || !is_terminal(it->second.disposition)) {
            plan.push_back(u);
        }
    }
    return plan;
}

JournalWriter::JournalWriter(const std::filesystem::path& path)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        if (!text.empty() && text.back() != '\n') {
            auto keep = text.rfind('\n');
            fs::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
        }
    }
    m_file = std::fopen(path.c_str(), "ab");
    if (m_file == nullptr) {
        throw DataError("cannot open journal " + path.string());
    }
}

JournalWriter::~JournalWriter()
{
    if (m_file != nullptr) {
        std::fclose(m_file);
    }
}

void JournalWriter::append(const JournalEntry& e)
{
    auto line = format_journal_line(e) + '\n';
    std::lock_guard lock(m_mutex);
    if (std::fwrite(line.data(), 1, line.size(), m_file) != line.size() || std::fflush(m_file) != 0) {
        throw DataError("journal write failed");
    }
}

}  // namespace snapcorpus::archive
