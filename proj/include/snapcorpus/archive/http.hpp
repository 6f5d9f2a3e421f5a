#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snapcorpus::archive {

struct HttpResponse {
    int status = 0;  // 0 when the transport failed
    std::string body;
    std::string content_type;
    std::string error;

    bool transport_failed() const noexcept { return status == 0; }
};

/// {origin, path+query} for an absolute http(s) URL. Throws DataError otherwise.
std::pair<std::string, std::string> split_http_url(std::string_view url);

/// Percent-encodes a query parameter value.
std::string encode_query_value(std::string_view v);

/// Percent-encodes bytes that may not appear raw in a request target
/// (space, controls, non-ASCII). Existing escapes are left alone.
std::string encode_request_target(std::string_view target);

/// Blocking GET with a fresh connection per call (thread-safe).
HttpResponse http_get(const std::string& url, std::chrono::milliseconds timeout,
                      bool follow_redirects = false);

/// Spaces request start times per host. `acquire` reserves the next slot for
/// the host and sleeps until it; concurrent callers queue behind each other.
class HostGate {
  public:
    explicit HostGate(std::chrono::milliseconds interval) : m_interval(interval) {}

    void acquire(const std::string& host);

  private:
    using Clock = std::chrono::steady_clock;
    std::chrono::milliseconds m_interval;
    std::mutex m_mutex;
    std::map<std::string, Clock::time_point> m_next;
};

}  // namespace snapcorpus::archive
