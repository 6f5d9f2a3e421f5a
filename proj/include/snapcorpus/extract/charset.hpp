#pragma once

#include <string>
#include <string_view>

namespace snapcorpus::extract {

struct DecodedText {
    std::string utf8;
    std::string charset;  // what was actually used
};

/// Charset named in a Content-Type value ("text/html; charset=x"), lowercased.
std::string charset_from_content_type(std::string_view content_type);

/// Charset declared by a <meta> tag in the first few KB of a document.
std::string sniff_meta_charset(std::string_view html);

bool is_valid_utf8(std::string_view bytes);

/// Converts to UTF-8 trying, in order: the HTTP hint, a meta declaration, a
/// byte-order mark, plain UTF-8, then a permissive windows-1252 decode that
/// never fails.
DecodedText decode_html(std::string_view bytes, std::string_view http_charset_hint);

}  // namespace snapcorpus::extract
