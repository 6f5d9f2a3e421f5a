#include "snapcorpus/archive/http.hpp"

#include <httplib.h>

#include <thread>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::archive {

std::pair<std::string, std::string> split_http_url(std::string_view url)
{
    std::size_t start = 0;
    if (starts_with_ci(url, "http://")) {
        start = 7;
    } else if (starts_with_ci(url, "https://")) {
        start = 8;
    } else {
        throw DataError("not an http(s) URL: " + std::string(url));
    }
    auto slash = url.find_first_of("/?", start);
    if (slash == start) {
        throw DataError("URL has no host: " + std::string(url));
    }
    std::string origin(url.substr(0, slash));
    std::string target = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
    if (target.front() == '?') {
        target.insert(target.begin(), '/');
    }
    return {origin, target};
}

std::string encode_query_value(std::string_view v)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : v) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        }
    }
    return out;
}

std::string encode_request_target(std::string_view target)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : target) {
        if (c <= 0x20 || c >= 0x7f || c == '"' || c == '<' || c == '>' || c == '#') {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

HttpResponse http_get(const std::string& url, std::chrono::milliseconds timeout, bool follow_redirects)
{
    HttpResponse out;
    std::pair<std::string, std::string> parts;
    try {
        parts = split_http_url(url);
    } catch (const DataError& e) {
        out.error = e.what();
        return out;
    }
    httplib::Client cli(parts.first);
    cli.set_url_encode(false);
    cli.set_follow_location(follow_redirects);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    auto res = cli.Get(encode_request_target(parts.second));
    if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = std::move(res->body);
    out.content_type = res->get_header_value("Content-Type");
    return out;
}

void HostGate::acquire(const std::string& host)
{
    Clock::time_point slot;
    {
        std::lock_guard lock(m_mutex);
        auto now = Clock::now();
        auto& next = m_next[host];
        slot = std::max(now, next);
        next = slot + m_interval;
    }
    std::this_thread::sleep_until(slot);
}

}  // namespace snapcorpus::archive
