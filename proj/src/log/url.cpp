#include "snapcorpus/log/url.hpp"

#include <cctype>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::log {

namespace {

struct UrlParts {
    std::string_view scheme;
    bool hierarchical = false;
    std::string_view authority;
    std::string_view path;
    std::string_view query;  // includes the leading '?'
};

std::size_t scheme_length(std::string_view s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) {
        return 0;
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == ':') {
            return i;
        }
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
            return 0;
        }
    }
    return 0;
}

UrlParts split_url(std::string_view s)
{
    UrlParts p;
    auto n = scheme_length(s);
    if (n == 0) {
        throw DataError("unparseable URL (no scheme): '" + std::string(s) + "'");
    }
    p.scheme = s.substr(0, n);
    auto rest = s.substr(n + 1);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) {
        rest = rest.substr(0, hash);
    }
    if (rest.substr(0, 2) == "//") {
        p.hierarchical = true;
        rest.remove_prefix(2);
        auto end = rest.find_first_of("/?");
        p.authority = rest.substr(0, end);
        rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
        if (p.authority.empty()) {
            throw DataError("unparseable URL (empty host): '" + std::string(s) + "'");
        }
    }
    auto q = rest.find('?');
    p.path = rest.substr(0, q);
    p.query = q == std::string_view::npos ? std::string_view{} : rest.substr(q);
    return p;
}

std::string lower_host_in_authority(std::string_view authority)
{
    auto at = authority.rfind('@');
    std::string out;
    std::string_view host_port = authority;
    if (at != std::string_view::npos) {
        out = std::string(authority.substr(0, at + 1));
        host_port = authority.substr(at + 1);
    }
    out += to_lower_ascii(host_port);
    return out;
}

}  // namespace

std::string canonicalize_url(std::string_view url)
{
    auto s = trim(url);
    if (s.empty()) {
        throw DataError("unparseable URL: empty string");
    }
    auto p = split_url(s);
    std::string out = to_lower_ascii(p.scheme) + ':';
    if (p.hierarchical) {
        out += "//";
        out += lower_host_in_authority(p.authority);
        if (!(p.path == "/" && p.query.empty())) {
            out += p.path;
        }
    } else {
        out += p.path;
    }
    out += p.query;
    return out;
}

bool is_homepage(std::string_view canonical_url)
{
    UrlParts p;
    try {
        p = split_url(canonical_url);
    } catch (const DataError&) {
        return false;
    }
    return (p.path.empty() || p.path == "/") && p.query.empty();
}

std::string url_scheme(std::string_view url)
{
    auto n = scheme_length(url);
    return n == 0 ? std::string{} : to_lower_ascii(url.substr(0, n));
}

std::string url_host(std::string_view url)
{
    auto n = scheme_length(url);
    if (n == 0 || url.substr(n + 1, 2) != "//") {
        return {};
    }
    auto rest = url.substr(n + 3);
    auto authority = rest.substr(0, rest.find_first_of("/?#"));
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        authority.remove_prefix(at + 1);
    }
    if (!authority.empty() && authority.front() == '[') {
        return to_lower_ascii(authority.substr(0, authority.find(']') + 1));
    }
    return to_lower_ascii(authority.substr(0, authority.find(':')));
}

}  // namespace snapcorpus::log
