#pragma once

#include <string>
#include <string_view>

namespace snapcorpus::log {

/// Lowercases scheme and host, drops the fragment and a bare "/" path.
/// Leaves percent-encoding, "www." and the scheme choice untouched so the
/// result still matches the literal key an archive stores.
/// Throws DataError when no scheme can be found.
std::string canonicalize_url(std::string_view url);

/// True when the URL has an empty or "/" path and no query string.
bool is_homepage(std::string_view canonical_url);

/// The lowercase scheme ("http", "ftp", ...), or empty when none.
std::string url_scheme(std::string_view url);

/// The host part of a URL (no userinfo or port), lowercased.
std::string url_host(std::string_view url);

}  // namespace snapcorpus::log
