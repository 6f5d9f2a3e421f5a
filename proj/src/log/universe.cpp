#include "snapcorpus/log/universe.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/log/url.hpp"

namespace snapcorpus::log {

void UrlUniverse::add_click(const std::string& canonical_url, std::uint64_t count)
{
    if (count == 0) {
        return;
    }
    m_counts[canonical_url] += count;
    m_total += count;
}

void UrlUniverse::merge(const UrlUniverse& other)
{
    for (const auto& [url, n] : other.m_counts) {
        add_click(url, n);
    }
}

std::uint64_t UrlUniverse::clicks(const std::string& url) const
{
    auto it = m_counts.find(url);
    return it == m_counts.end() ? 0 : it->second;
}

std::vector<std::string> UrlUniverse::urls() const
{
    std::vector<std::string> out;
    out.reserve(m_counts.size());
    for (const auto& kv : m_counts) {
        out.push_back(kv.first);
    }
    return out;
}

void UniverseBuilder::add(const LogRecord& r)
{
    if (!r.click) {
        return;
    }
    try {
        m_universe.add_click(canonicalize_url(r.click->url));
    } catch (const DataError&) {
        ++m_bad_urls;
    }
}

UrlUniverse build_url_universe(const std::vector<LogRecord>& records)
{
    UniverseBuilder b;
    for (const auto& r : records) {
        b.add(r);
    }
    return b.take();
}

UniverseStats universe_stats(const UrlUniverse& u)
{
    UniverseStats s;
    s.unique_count = u.size();
    if (u.empty()) {
        return s;
    }
    std::size_t single = 0;
    std::size_t home = 0;
    for (const auto& [url, n] : u.click_counts()) {
        single += n == 1;
        home += is_homepage(url);
        ++s.scheme_histogram[url_scheme(url)];
    }
    s.single_click_fraction = static_cast<double>(single) / static_cast<double>(u.size());
    s.homepage_fraction = static_cast<double>(home) / static_cast<double>(u.size());
    return s;
}

std::string format_universe(const UrlUniverse& u)
{
    std::string out;
    for (const auto& [url, n] : u.click_counts()) {
        out += url;
        out += '\t';
        out += std::to_string(n);
        out += '\n';
    }
    return out;
}

UrlUniverse parse_universe(std::string_view text)
{
    UrlUniverse u;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = split(line, '\t');
        std::uint64_t n = 0;
        if (fields.size() != 2 ||
            std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), n).ec != std::errc{} ||
            n == 0) {
            throw LineError(line_no, "malformed universe row");
        }
        u.add_click(std::string(fields[0]), n);
    }
    return u;
}

void write_universe(const UrlUniverse& u, const std::filesystem::path& path)
{
    write_file_atomic(path.string(), format_universe(u));
}

UrlUniverse read_universe(const std::filesystem::path& path)
{
    return parse_universe(gzip::read_file(path));
}

std::string format_universe_stats(const UniverseStats& s, const ReadStats& read)
{
    std::ostringstream out;
    char buf[64];
    out << "lines\t" << read.lines << '\n';
    out << "records\t" << read.records << '\n';
    out << "skipped_lines\t" << read.skipped << '\n';
    out << "malformed_lines\t" << read.malformed << '\n';
    out << "unique_urls\t" << s.unique_count << '\n';
    std::snprintf(buf, sizeof buf, "%.4f", s.single_click_fraction);
    out << "single_click_fraction\t" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.4f", s.homepage_fraction);
    out << "homepage_fraction\t" << buf << '\n';
    for (const auto& [scheme, n] : s.scheme_histogram) {
        out << "scheme:" << (scheme.empty() ? "(none)" : scheme) << '\t' << n << '\n';
    }
    for (const auto& [file, issue] : read.samples) {
        out << "# " << file << ':' << issue.line << ": " << issue.message << '\n';
    }
    return out.str();
}

}  // namespace snapcorpus::log
