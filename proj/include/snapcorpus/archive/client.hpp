#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/archive/http.hpp"
#include "snapcorpus/archive/journal.hpp"
#include "snapcorpus/archive/types.hpp"

namespace snapcorpus::archive {

/// Parses an availability response body. Returns the closest capture if the
/// body has one, whether or not it is usable.
std::optional<Snapshot> parse_availability(std::string_view json);

/// A capture is accepted only if available and archived with status 200.
bool is_acceptable(const Snapshot& s);

/// The raw-content form of a capture URL ("/web/<ts>id_/<url>"), which
/// serves the original payload without the archive's injected banner.
std::string raw_content_url(std::string_view archive_url);

struct LookupOutcome {
    Disposition disposition = Disposition::deferred;
    std::optional<Snapshot> snapshot;
    unsigned attempts = 0;
    std::string detail;
};

struct FetchOutcome {
    Disposition disposition = Disposition::unrecoverable;
    std::string body;
    std::string content_type;
    unsigned attempts = 0;
    std::int64_t elapsed_ms = 0;
    std::string detail;
};

/// Availability lookups and raw fetches with per-host politeness and
/// exponential backoff with jitter on transient failures (transport errors,
/// 429 and 5xx).
class ArchiveClient {
  public:
    using SleepFn = std::function<void(std::chrono::milliseconds)>;

    ArchiveClient(std::string availability_endpoint, FetchPolicy policy);

    /// Replaces the real sleep used for backoff waits (tests record it).
    void set_backoff_sleep(SleepFn fn) { m_sleep = std::move(fn); }

    LookupOutcome query_availability(const std::string& canonical_url);
    LookupOutcome query_availability(const std::string& canonical_url, std::string_view target);
    FetchOutcome fetch_snapshot(const Snapshot& s);

    /// Backoff before retry number `retry` (1-based) for `key`. Deterministic
    /// for a given policy seed.
    std::chrono::milliseconds backoff_delay(const std::string& key, unsigned retry) const;

    const FetchPolicy& policy() const noexcept { return m_policy; }

  private:
    HttpResponse polite_get(const std::string& url);

    std::string m_endpoint;
    FetchPolicy m_policy;
    HostGate m_gate;
    SleepFn m_sleep;
};

/// Persists raw payloads as <dir>/<id[0:2]>/<id>.body plus a .meta file
/// holding the content type.
class RawStore {
  public:
    explicit RawStore(std::filesystem::path dir) : m_dir(std::move(dir)) {}

    void put(const std::string& doc_id, std::string_view body, std::string_view content_type) const;
    bool contains(const std::string& doc_id) const;
    std::string body(const std::string& doc_id) const;
    std::string content_type(const std::string& doc_id) const;

  private:
    std::filesystem::path path_for(const std::string& doc_id, std::string_view ext) const;
    std::filesystem::path m_dir;
};

struct CrawlSummary {
    std::size_t planned = 0;
    std::size_t processed = 0;
    std::map<Disposition, std::size_t> by_disposition;
    bool interrupted = false;
};

struct CrawlControl {
    /// Stop scheduling new work after this many completed items (0 = never).
    /// Used to simulate a killed process.
    std::size_t stop_after = 0;
    std::function<void(const JournalEntry&)> on_entry;
};

/// Looks up every URL in `urls` that the journal does not already settle.
CrawlSummary run_lookups(ArchiveClient& client, const std::vector<std::string>& urls,
                         const std::filesystem::path& journal_path, const CrawlControl& control = {});

/// Fetches every mapping row whose URL the fetch journal does not settle.
CrawlSummary run_fetches(ArchiveClient& client, const std::vector<ArchiveMapping>& rows,
                         const std::filesystem::path& journal_path, const RawStore& store,
                         const CrawlControl& control = {});

/// Re-requests already fetched captures and journals the ones that are gone.
std::vector<std::string> revalidate(ArchiveClient& client, const std::vector<ArchiveMapping>& rows,
                                    const std::filesystem::path& journal_path);

/// Mapping rows for every located URL, ids assigned over the located set.
std::vector<ArchiveMapping> mapping_from_lookups(const Journal& journal);

/// The subset of `input` whose latest fetch disposition is `fetched`.
std::vector<ArchiveMapping> mapping_from_fetches(const Journal& journal,
                                                 const std::vector<ArchiveMapping>& input);

}  // namespace snapcorpus::archive
