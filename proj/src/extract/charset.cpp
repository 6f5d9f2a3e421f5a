#include "snapcorpus/extract/charset.hpp"

#include <iconv.h>

#include <array>
#include <cerrno>
#include <optional>

#include "snapcorpus/common/text.hpp"

namespace snapcorpus::extract {

namespace {

// windows-1252 code points for 0x80..0x9F; undefined slots map to U+FFFD.
constexpr std::array<char32_t, 32> k_cp1252_high = {
    0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD, 0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0x0178,
};

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string decode_cp1252(std::string_view bytes)
{
    std::string out;
    out.reserve(bytes.size() + bytes.size() / 8);
    for (unsigned char c : bytes) {
        if (c < 0x80) {
            out += static_cast<char>(c);
        } else if (c < 0xA0) {
            append_utf8(out, k_cp1252_high[c - 0x80]);
        } else {
            append_utf8(out, c);
        }
    }
    return out;
}

std::string normalize_name(std::string_view name)
{
    auto n = to_lower_ascii(trim(name));
    if (n == "utf8") {
        return "utf-8";
    }
    if (n == "latin1" || n == "latin-1" || n == "iso8859-1" || n == "iso_8859-1" || n == "us-ascii" ||
        n == "ascii") {
        // Browsers treat all of these as windows-1252.
        return "windows-1252";
    }
    return n;
}

std::optional<std::string> convert(std::string_view bytes, const std::string& charset)
{
    if (charset == "utf-8") {
        if (!is_valid_utf8(bytes)) {
            return std::nullopt;
        }
        return std::string(bytes);
    }
    if (charset == "windows-1252" || charset == "iso-8859-1") {
        return decode_cp1252(bytes);
    }
    iconv_t cd = iconv_open("UTF-8", charset.c_str());
    if (cd == reinterpret_cast<iconv_t>(-1)) {
        return std::nullopt;
    }
    std::string out;
    out.resize(bytes.size() * 4 + 16);
    char* in_ptr = const_cast<char*>(bytes.data());
    std::size_t in_left = bytes.size();
    char* out_ptr = out.data();
    std::size_t out_left = out.size();
    auto rc = iconv(cd, &in_ptr, &in_left, &out_ptr, &out_left);
    iconv_close(cd);
    if (rc == static_cast<std::size_t>(-1)) {
        return std::nullopt;
    }
    out.resize(out.size() - out_left);
    return out;
}

std::string_view value_after_charset(std::string_view s)
{
    auto lower = to_lower_ascii(s);
    auto pos = lower.find("charset");
    if (pos == std::string::npos) {
        return {};
    }
    pos += 7;
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) {
        ++pos;
    }
    if (pos >= s.size() || s[pos] != '=') {
        return {};
    }
    ++pos;
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '"' || s[pos] == '\'')) {
        ++pos;
    }
    auto end = pos;
    while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '-' ||
                              s[end] == '_' || s[end] == ':' || s[end] == '.')) {
        ++end;
    }
    return s.substr(pos, end - pos);
}

}  // namespace

std::string charset_from_content_type(std::string_view content_type)
{
    return to_lower_ascii(value_after_charset(content_type));
}

std::string sniff_meta_charset(std::string_view html)
{
    auto head = html.substr(0, 4096);
    auto lower = to_lower_ascii(head);
    std::size_t pos = 0;
    while ((pos = lower.find("<meta", pos)) != std::string::npos) {
        auto end = lower.find('>', pos);
        auto tag = head.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        auto v = value_after_charset(tag);
        if (!v.empty()) {
            return to_lower_ascii(v);
        }
        pos += 5;
    }
    return {};
}

bool is_valid_utf8(std::string_view bytes)
{
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t n = 0;
        char32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            n = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            n = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            n = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            if (i + k >= bytes.size()) {
                return false;
            }
            auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += n + 1;
    }
    return true;
}

DecodedText decode_html(std::string_view bytes, std::string_view http_charset_hint)
{
    std::string hint = charset_from_content_type(http_charset_hint);
    if (hint.empty() && http_charset_hint.find('=') == std::string_view::npos &&
        http_charset_hint.find('/') == std::string_view::npos) {
        hint = to_lower_ascii(trim(http_charset_hint));
    }
    for (const auto& candidate : {hint, sniff_meta_charset(bytes)}) {
        if (candidate.empty()) {
            continue;
        }
        auto name = normalize_name(candidate);
        if (auto out = convert(bytes, name)) {
            return {std::move(*out), name};
        }
    }
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") {
        auto rest = bytes.substr(3);
        if (auto out = convert(rest, "utf-8")) {
            return {std::move(*out), "utf-8"};
        }
    }
    if (bytes.substr(0, 2) == "\xFF\xFE" || bytes.substr(0, 2) == "\xFE\xFF") {
        auto name = bytes[0] == '\xFF' ? "utf-16le" : "utf-16be";
        if (auto out = convert(bytes.substr(2), name)) {
            return {std::move(*out), name};
        }
    }
    if (is_valid_utf8(bytes)) {
        return {std::string(bytes), "utf-8"};
    }
    return {decode_cp1252(bytes), "windows-1252"};
}

}  // namespace snapcorpus::extract
