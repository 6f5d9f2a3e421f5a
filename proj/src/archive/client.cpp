#include "snapcorpus/archive/client.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "snapcorpus/archive/doc_id.hpp"
#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/common/timestamp.hpp"
#include "snapcorpus/log/url.hpp"

namespace snapcorpus::archive {

namespace {

using Clock = std::chrono::steady_clock;

bool is_transient(const HttpResponse& r)
{
    return r.transport_failed() || r.status == 429 || r.status >= 500;
}

std::int64_t ms_since(Clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

/// Runs `work(i)` for every index on up to `workers` threads, honouring the
/// stop_after budget.
CrawlSummary run_pool(std::size_t n, unsigned workers, const CrawlControl& control,
                      const std::function<JournalEntry(std::size_t)>& work, JournalWriter& journal)
{
    CrawlSummary summary;
    summary.planned = n;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex mu;
    std::exception_ptr failure;
    auto body = [&] {
        while (true) {
            if (control.stop_after != 0 && done.load() >= control.stop_after) {
                return;
            }
            auto i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                auto entry = work(i);
                journal.append(entry);
                std::lock_guard lock(mu);
                ++summary.by_disposition[entry.disposition];
                ++summary.processed;
                if (control.on_entry) {
                    control.on_entry(entry);
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n);
                return;
            }
            ++done;
        }
    };
    auto count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < count; ++t) {
        threads.emplace_back(body);
    }
    body();
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    summary.interrupted = summary.processed < n;
    return summary;
}

}  // namespace

void FetchPolicy::validate() const
{
    if (max_concurrency < 1) {
        throw std::invalid_argument("max_concurrency must be >= 1");
    }
    if (max_retries > 20) {
        throw std::invalid_argument("max_retries must be <= 20");
    }
    if (!parse_ts14(target_timestamp)) {
        throw std::invalid_argument("target timestamp must be YYYYMMDDhhmmss: " + target_timestamp);
    }
    if (min_request_interval_per_host.count() < 0 || backoff_base.count() < 0) {
        throw std::invalid_argument("intervals must be non-negative");
    }
}

std::optional<Snapshot> parse_availability(std::string_view json)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed availability response: ") + e.what());
    }
    if (!doc.is_object()) {
        throw DataError("availability response is not an object");
    }
    auto snaps = doc.find("archived_snapshots");
    if (snaps == doc.end() || !snaps->is_object()) {
        return std::nullopt;
    }
    auto closest = snaps->find("closest");
    if (closest == snaps->end() || !closest->is_object()) {
        return std::nullopt;
    }
    Snapshot s;
    s.archive_url = closest->value("url", "");
    s.timestamp = closest->value("timestamp", "");
    s.available = closest->value("available", false);
    if (auto st = closest->find("status"); st != closest->end()) {
        if (st->is_number_integer()) {
            s.http_status = st->get<int>();
        } else if (st->is_string()) {
            try {
                s.http_status = std::stoi(st->get<std::string>());
            } catch (const std::exception&) {
                s.http_status = 0;
            }
        }
    }
    return s;
}

bool is_acceptable(const Snapshot& s)
{
    return s.available && s.http_status == 200 && parse_ts14(s.timestamp).has_value() &&
           !s.archive_url.empty();
}

std::string raw_content_url(std::string_view archive_url)
{
    auto pos = archive_url.find("/web/");
    if (pos == std::string_view::npos) {
        return std::string(archive_url);
    }
    auto ts_start = pos + 5;
    auto ts_end = ts_start;
    while (ts_end < archive_url.size() && std::isdigit(static_cast<unsigned char>(archive_url[ts_end]))) {
        ++ts_end;
    }
    if (ts_end == ts_start || archive_url.substr(ts_end, 3) == "id_") {
        return std::string(archive_url);
    }
    std::string out(archive_url.substr(0, ts_end));
    out += "id_";
    out += archive_url.substr(ts_end);
    return out;
}

ArchiveClient::ArchiveClient(std::string availability_endpoint, FetchPolicy policy)
    : m_endpoint(std::move(availability_endpoint)),
      m_policy(std::move(policy)),
      m_gate(m_policy.min_request_interval_per_host),
      m_sleep([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })
{
    m_policy.validate();
}

std::chrono::milliseconds ArchiveClient::backoff_delay(const std::string& key, unsigned retry) const
{
    auto digest = md5_hex(key + '\t' + std::to_string(m_policy.seed) + '\t' + std::to_string(retry));
    std::mt19937_64 rng(std::stoull(digest.substr(0, 16), nullptr, 16));
    double jitter = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    double base = static_cast<double>(m_policy.backoff_base.count()) * std::ldexp(1.0, static_cast<int>(retry) - 1);
    return std::chrono::milliseconds(static_cast<std::int64_t>(base * (1.0 + jitter)));
}

HttpResponse ArchiveClient::polite_get(const std::string& url)
{
    m_gate.acquire(log::url_host(url));
    return http_get(url, m_policy.request_timeout, false);
}

LookupOutcome ArchiveClient::query_availability(const std::string& canonical_url)
{
    return query_availability(canonical_url, m_policy.target_timestamp);
}

LookupOutcome ArchiveClient::query_availability(const std::string& canonical_url, std::string_view target)
{
    LookupOutcome out;
    auto started = Clock::now();
    std::string request = m_endpoint + (m_endpoint.find('?') == std::string::npos ? "?" : "&") +
                          "url=" + encode_query_value(canonical_url) +
                          "&timestamp=" + encode_query_value(target);
    while (true) {
        ++out.attempts;
        auto res = polite_get(request);
        if (!is_transient(res)) {
            if (res.status == 404) {
                out.disposition = Disposition::no_snapshot;
                out.detail = "404";
                return out;
            }
            if (res.status < 200 || res.status >= 300) {
                out.disposition = Disposition::failed;
                out.detail = "HTTP " + std::to_string(res.status);
                return out;
            }
            try {
                auto snap = parse_availability(res.body);
                if (snap && is_acceptable(*snap)) {
                    out.disposition = Disposition::located;
                    out.snapshot = std::move(snap);
                } else {
                    out.disposition = Disposition::no_snapshot;
                    out.detail = snap ? "rejected status " + std::to_string(snap->http_status) : "none";
                    out.snapshot = std::move(snap);
                }
                return out;
            } catch (const DataError& e) {
                out.detail = e.what();
                // A garbled body is treated like a transient failure.
            }
        } else {
            out.detail = res.transport_failed() ? res.error : "HTTP " + std::to_string(res.status);
        }
        if (out.attempts > m_policy.max_retries) {
            out.disposition = Disposition::deferred;
            return out;
        }
        auto delay = backoff_delay(canonical_url, out.attempts);
        if (ms_since(started) + delay.count() > m_policy.per_url_budget.count()) {
            out.disposition = Disposition::deferred;
            out.detail += " (budget exhausted)";
            return out;
        }
        m_sleep(delay);
    }
}

FetchOutcome ArchiveClient::fetch_snapshot(const Snapshot& s)
{
    FetchOutcome out;
    auto started = Clock::now();
    auto url = raw_content_url(s.archive_url);
    while (true) {
        ++out.attempts;
        m_gate.acquire(log::url_host(url));
        auto res = http_get(url, m_policy.request_timeout, true);
        if (!is_transient(res)) {
            if (res.status >= 200 && res.status < 300) {
                out.disposition = Disposition::fetched;
                out.body = std::move(res.body);
                out.content_type = std::move(res.content_type);
            } else {
                out.disposition = (res.status == 404 || res.status == 403 || res.status == 410 || res.status == 451)
                                      ? Disposition::deleted
                                      : Disposition::unrecoverable;
                out.detail = "HTTP " + std::to_string(res.status);
            }
            out.elapsed_ms = ms_since(started);
            return out;
        }
        out.detail = res.transport_failed() ? res.error : "HTTP " + std::to_string(res.status);
        auto delay = backoff_delay(url, out.attempts);
        if (out.attempts > m_policy.max_retries ||
            ms_since(started) + delay.count() > m_policy.per_url_budget.count()) {
            out.disposition = Disposition::unrecoverable;
            out.elapsed_ms = ms_since(started);
            return out;
        }
        m_sleep(delay);
    }
}

std::filesystem::path RawStore::path_for(const std::string& doc_id, std::string_view ext) const
{
    return m_dir / doc_id.substr(0, 2) / (doc_id + std::string(ext));
}

void RawStore::put(const std::string& doc_id, std::string_view body, std::string_view content_type) const
{
    write_file_atomic(path_for(doc_id, ".body").string(), body);
    write_file_atomic(path_for(doc_id, ".meta").string(), std::string(content_type) + '\n');
}

bool RawStore::contains(const std::string& doc_id) const
{
    return std::filesystem::exists(path_for(doc_id, ".body"));
}

std::string RawStore::body(const std::string& doc_id) const
{
    std::ifstream in(path_for(doc_id, ".body"), std::ios::binary);
    if (!in) {
        throw DataError("raw payload missing for " + doc_id);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string RawStore::content_type(const std::string& doc_id) const
{
    std::ifstream in(path_for(doc_id, ".meta"));
    std::string line;
    std::getline(in, line);
    return line;
}

CrawlSummary run_lookups(ArchiveClient& client, const std::vector<std::string>& urls,
                         const std::filesystem::path& journal_path, const CrawlControl& control)
{
    auto plan = resume_crawl(read_journal(journal_path), urls);
    JournalWriter journal(journal_path);
    return run_pool(
        plan.size(), client.policy().max_concurrency, control,
        [&](std::size_t i) {
            auto outcome = client.query_availability(plan[i]);
            JournalEntry e;
            e.url = plan[i];
            e.disposition = outcome.disposition;
            e.attempts = outcome.attempts;
            if (outcome.disposition == Disposition::located) {
                e.timestamp = outcome.snapshot->timestamp;
                e.archive_url = outcome.snapshot->archive_url;
            }
            return e;
        },
        journal);
}

CrawlSummary run_fetches(ArchiveClient& client, const std::vector<ArchiveMapping>& rows,
                         const std::filesystem::path& journal_path, const RawStore& store,
                         const CrawlControl& control)
{
    std::vector<std::string> urls;
    std::map<std::string, const ArchiveMapping*> by_url;
    for (const auto& r : rows) {
        urls.push_back(r.original_url);
        by_url[r.original_url] = &r;
    }
    auto plan = resume_crawl(read_journal(journal_path), urls);
    JournalWriter journal(journal_path);
    return run_pool(
        plan.size(), client.policy().max_concurrency, control,
        [&](std::size_t i) {
            const auto& row = *by_url.at(plan[i]);
            auto outcome = client.fetch_snapshot({row.archive_url, row.timestamp, 200, true});
            if (outcome.disposition == Disposition::fetched) {
                store.put(row.doc_id, outcome.body, outcome.content_type);
            } else if (outcome.disposition == Disposition::deleted) {
                outcome.disposition = Disposition::unrecoverable;
            }
            JournalEntry e;
            e.url = row.original_url;
            e.disposition = outcome.disposition;
            e.attempts = outcome.attempts;
            e.timestamp = row.timestamp;
            e.archive_url = row.archive_url;
            e.bytes = outcome.body.size();
            e.elapsed_ms = outcome.elapsed_ms;
            return e;
        },
        journal);
}

std::vector<std::string> revalidate(ArchiveClient& client, const std::vector<ArchiveMapping>& rows,
                                    const std::filesystem::path& journal_path)
{
    auto j = read_journal(journal_path);
    JournalWriter journal(journal_path);
    std::vector<std::string> gone;
    for (const auto& row : rows) {
        auto it = j.latest.find(row.original_url);
        if (it == j.latest.end() || it->second.disposition != Disposition::fetched) {
            continue;
        }
        auto outcome = client.fetch_snapshot({row.archive_url, row.timestamp, 200, true});
        if (outcome.disposition == Disposition::deleted) {
            JournalEntry e = it->second;
            e.disposition = Disposition::deleted;
            e.attempts = outcome.attempts;
            e.bytes = 0;
            e.elapsed_ms = outcome.elapsed_ms;
            journal.append(e);
            gone.push_back(row.original_url);
        }
    }
    return gone;
}

std::vector<ArchiveMapping> mapping_from_lookups(const Journal& journal)
{
    std::vector<std::string> located;
    for (const auto& [url, e] : journal.latest) {
        if (e.disposition == Disposition::located) {
            located.push_back(url);
        }
    }
    auto ids = assign_doc_ids(located);
    std::vector<ArchiveMapping> rows;
    rows.reserve(located.size());
    for (const auto& url : located) {
        const auto& e = journal.latest.at(url);
        rows.push_back({ids.at(url), url, e.timestamp, e.archive_url});
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<ArchiveMapping> mapping_from_fetches(const Journal& journal,
                                                 const std::vector<ArchiveMapping>& input)
{
    std::vector<ArchiveMapping> rows;
    for (const auto& r : input) {
        auto it = journal.latest.find(r.original_url);
        if (it != journal.latest.end() && it->second.disposition == Disposition::fetched) {
            rows.push_back(r);
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace snapcorpus::archive
