#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snapcorpus::archive {

enum class Disposition {
    located,            // lookup found an acceptable capture
    no_snapshot,        // lookup found nothing usable (absent, unavailable, non-200)
    failed,             // permanent client error during lookup
    deferred,           // retries exhausted; retried on the next run
    fetched,            // raw payload stored
    unrecoverable,      // fetch failed for good; document excluded
    deleted,            // previously fetched capture no longer served
};

std::string_view to_string(Disposition d);
std::optional<Disposition> parse_disposition(std::string_view s);

/// Terminal dispositions are never retried by a resumed crawl.
bool is_terminal(Disposition d);

/// One journal line:
///   url \t disposition \t attempts \t timestamp \t archive_url \t bytes \t elapsed_ms \t crc32
/// Empty optional fields are written as "-". The checksum covers every byte
/// before the final tab.
struct JournalEntry {
    std::string url;
    Disposition disposition = Disposition::deferred;
    unsigned attempts = 0;
    std::string timestamp;
    std::string archive_url;
    std::uint64_t bytes = 0;
    std::int64_t elapsed_ms = 0;

    bool operator==(const JournalEntry&) const = default;
};

std::string format_journal_line(const JournalEntry& e);

/// The latest entry per URL plus bookkeeping from the scan.
struct Journal {
    std::map<std::string, JournalEntry> latest;
    std::size_t lines = 0;
    bool dropped_partial_tail = false;
};

/// Reads a journal. A damaged final line (truncated write) is dropped; a bad
/// checksum anywhere else throws DataError.
Journal read_journal(const std::filesystem::path& path);

/// URLs in `urls` (order kept) whose latest entry is missing or non-terminal.
std::vector<std::string> resume_crawl(const Journal& journal, const std::vector<std::string>& urls);

/// Append-only, single writer, flushed per line. Opening trims a partial
/// final line so later appends start on a fresh line.
class JournalWriter {
  public:
    explicit JournalWriter(const std::filesystem::path& path);
    ~JournalWriter();
    JournalWriter(const JournalWriter&) = delete;
    JournalWriter& operator=(const JournalWriter&) = delete;

    void append(const JournalEntry& e);

  private:
    std::mutex m_mutex;
    std::FILE* m_file = nullptr;
};

}  // namespace snapcorpus::archive
