#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "snapcorpus/log/log_record.hpp"

namespace snapcorpus::log {

/// Every distinct canonical clicked URL with its total click count.
/// Keys are ordered bytewise, which is also the report order.
class UrlUniverse {
  public:
    void add_click(const std::string& canonical_url, std::uint64_t count = 1);

    /// Commutative multiset union.
    void merge(const UrlUniverse& other);

    std::size_t size() const noexcept { return m_counts.size(); }
    bool empty() const noexcept { return m_counts.empty(); }
    bool contains(const std::string& url) const { return m_counts.count(url) != 0; }
    std::uint64_t clicks(const std::string& url) const;
    std::uint64_t total_clicks() const noexcept { return m_total; }

    const std::map<std::string, std::uint64_t>& click_counts() const noexcept { return m_counts; }
    std::vector<std::string> urls() const;

    bool operator==(const UrlUniverse& o) const { return m_counts == o.m_counts; }

  private:
    std::map<std::string, std::uint64_t> m_counts;
    std::uint64_t m_total = 0;
};

/// Accumulates a universe from a record stream. Click URLs that cannot be
/// canonicalized are counted and skipped.
class UniverseBuilder {
  public:
    void add(const LogRecord& r);
    const UrlUniverse& universe() const noexcept { return m_universe; }
    UrlUniverse take() { return std::move(m_universe); }
    std::size_t bad_urls() const noexcept { return m_bad_urls; }

  private:
    UrlUniverse m_universe;
    std::size_t m_bad_urls = 0;
};

UrlUniverse build_url_universe(const std::vector<LogRecord>& records);

struct UniverseStats {
    std::size_t unique_count = 0;
    double single_click_fraction = 0.0;
    double homepage_fraction = 0.0;
    std::map<std::string, std::size_t> scheme_histogram;
};

UniverseStats universe_stats(const UrlUniverse& u);

/// canonical_url \t click_count, one row per URL in bytewise order.
std::string format_universe(const UrlUniverse& u);
UrlUniverse parse_universe(std::string_view text);
void write_universe(const UrlUniverse& u, const std::filesystem::path& path);
UrlUniverse read_universe(const std::filesystem::path& path);

std::string format_universe_stats(const UniverseStats& s, const ReadStats& read);

}  // namespace snapcorpus::log
