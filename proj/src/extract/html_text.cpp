#include "snapcorpus/extract/html_text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "snapcorpus/common/text.hpp"
#include "snapcorpus/extract/charset.hpp"

namespace snapcorpus::extract {

namespace {

void append_utf8(std::string& out, char32_t cp)
{
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        cp = 0xFFFD;
    }
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

const std::unordered_map<std::string_view, char32_t>& named_entities()
{
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"amp", '&'},       {"lt", '<'},         {"gt", '>'},        {"quot", '"'},
        {"apos", '\''},     {"nbsp", 0xA0},      {"iexcl", 0xA1},    {"cent", 0xA2},
        {"pound", 0xA3},    {"curren", 0xA4},    {"yen", 0xA5},      {"brvbar", 0xA6},
        {"sect", 0xA7},     {"uml", 0xA8},       {"copy", 0xA9},     {"ordf", 0xAA},
        {"laquo", 0xAB},    {"not", 0xAC},       {"shy", 0xAD},      {"reg", 0xAE},
        {"macr", 0xAF},     {"deg", 0xB0},       {"plusmn", 0xB1},   {"sup2", 0xB2},
        {"sup3", 0xB3},     {"acute", 0xB4},     {"micro", 0xB5},    {"para", 0xB6},
        {"middot", 0xB7},   {"cedil", 0xB8},     {"sup1", 0xB9},     {"ordm", 0xBA},
        {"raquo", 0xBB},    {"frac14", 0xBC},    {"frac12", 0xBD},   {"frac34", 0xBE},
        {"iquest", 0xBF},   {"Agrave", 0xC0},    {"Aacute", 0xC1},   {"Acirc", 0xC2},
        {"Atilde", 0xC3},   {"Auml", 0xC4},      {"Aring", 0xC5},    {"AElig", 0xC6},
        {"Ccedil", 0xC7},   {"Egrave", 0xC8},    {"Eacute", 0xC9},   {"Ecirc", 0xCA},
        {"Euml", 0xCB},     {"Igrave", 0xCC},    {"Iacute", 0xCD},   {"Icirc", 0xCE},
        {"Iuml", 0xCF},     {"ETH", 0xD0},       {"Ntilde", 0xD1},   {"Ograve", 0xD2},
        {"Oacute", 0xD3},   {"Ocirc", 0xD4},     {"Otilde", 0xD5},   {"Ouml", 0xD6},
        {"times", 0xD7},    {"Oslash", 0xD8},    {"Ugrave", 0xD9},   {"Uacute", 0xDA},
        {"Ucirc", 0xDB},    {"Uuml", 0xDC},      {"Yacute", 0xDD},   {"THORN", 0xDE},
        {"szlig", 0xDF},    {"agrave", 0xE0},    {"aacute", 0xE1},   {"acirc", 0xE2},
        {"atilde", 0xE3},   {"auml", 0xE4},      {"aring", 0xE5},    {"aelig", 0xE6},
        {"ccedil", 0xE7},   {"egrave", 0xE8},    {"eacute", 0xE9},   {"ecirc", 0xEA},
        {"euml", 0xEB},     {"igrave", 0xEC},    {"iacute", 0xED},   {"icirc", 0xEE},
        {"iuml", 0xEF},     {"eth", 0xF0},       {"ntilde", 0xF1},   {"ograve", 0xF2},
        {"oacute", 0xF3},   {"ocirc", 0xF4},     {"otilde", 0xF5},   {"ouml", 0xF6},
        {"divide", 0xF7},   {"oslash", 0xF8},    {"ugrave", 0xF9},   {"uacute", 0xFA},
        {"ucirc", 0xFB},    {"uuml", 0xFC},      {"yacute", 0xFD},   {"thorn", 0xFE},
        {"yuml", 0xFF},     {"OElig", 0x152},    {"oelig", 0x153},   {"Scaron", 0x160},
        {"scaron", 0x161},  {"Yuml", 0x178},     {"fnof", 0x192},    {"circ", 0x2C6},
        {"tilde", 0x2DC},   {"ndash", 0x2013},   {"mdash", 0x2014},  {"lsquo", 0x2018},
        {"rsquo", 0x2019},  {"sbquo", 0x201A},   {"ldquo", 0x201C},  {"rdquo", 0x201D},
        {"bdquo", 0x201E},  {"dagger", 0x2020},  {"Dagger", 0x2021}, {"bull", 0x2022},
        {"hellip", 0x2026}, {"permil", 0x2030},  {"lsaquo", 0x2039}, {"rsaquo", 0x203A},
        {"euro", 0x20AC},   {"trade", 0x2122},   {"larr", 0x2190},   {"rarr", 0x2192},
        {"ensp", 0x2002},   {"emsp", 0x2003},    {"thinsp", 0x2009},
    };
    return table;
}

// Numeric references in 0x80..0x9F name windows-1252 characters.
constexpr std::array<char32_t, 32> k_c1_fixups = {
    0x20AC, 0x81,   0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0x8D,   0x017D, 0x8F,   0x90,   0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x9D,   0x017E, 0x0178,
};

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_';
}

const std::unordered_set<std::string_view>& skipped_elements()
{
    static const std::unordered_set<std::string_view> s = {"script", "style", "noscript", "template",
                                                          "iframe", "noembed"};
    return s;
}

const std::unordered_set<std::string_view>& block_elements()
{
    static const std::unordered_set<std::string_view> s = {
        "address", "article", "aside",  "blockquote", "body",     "br",     "caption", "center",
        "dd",      "div",     "dl",     "dt",         "fieldset", "figcaption", "figure", "footer",
        "form",    "frame",   "frameset", "h1",       "h2",       "h3",     "h4",      "h5",
        "h6",      "header",  "hr",     "html",       "img",      "input",  "legend",  "li",
        "main",    "menu",    "nav",    "noframes",   "ol",       "option", "p",       "pre",
        "section", "select",  "table",  "tbody",      "td",       "textarea", "tfoot", "th",
        "thead",   "title",   "tr",     "ul",         "area",     "map",    "button",  "label",
    };
    return s;
}

const std::unordered_set<std::string_view>& head_elements()
{
    static const std::unordered_set<std::string_view> s = {"title", "meta", "link", "base", "style",
                                                          "script", "noscript", "template", "head",
                                                          "html", "bgsound", "basefont", "object"};
    return s;
}

/// Collects text, collapsing whitespace and replacing '<' with a boundary.
class TextSink {
  public:
    void text(std::string_view s)
    {
        for (std::size_t i = 0; i < s.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(s[i]);
            bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == '<';
            // U+00A0 no-break space
            if (c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0) {
                space = true;
                ++i;
            }
            if (space) {
                m_pending_space = true;
            } else {
                if (m_pending_space && !m_out.empty()) {
                    m_out += ' ';
                }
                m_pending_space = false;
                m_out += static_cast<char>(c);
            }
        }
    }
    void boundary() { m_pending_space = true; }
    std::string take() { return std::move(m_out); }
    const std::string& str() const { return m_out; }

  private:
    std::string m_out;
    bool m_pending_space = false;
};

struct Tag {
    std::string name;
    bool closing = false;
    bool self_closing = false;
    std::size_t end = 0;  // index after '>'
};

/// Parses a tag starting at html[pos] == '<'. Returns nullopt when the '<'
/// does not open a tag.
std::optional<Tag> parse_tag(std::string_view html, std::size_t pos)
{
    std::size_t i = pos + 1;
    Tag t;
    if (i < html.size() && html[i] == '/') {
        t.closing = true;
        ++i;
    }
    if (i >= html.size() || !std::isalpha(static_cast<unsigned char>(html[i]))) {
        return std::nullopt;
    }
    auto name_start = i;
    while (i < html.size() && is_name_char(html[i])) {
        ++i;
    }
    t.name = to_lower_ascii(html.substr(name_start, i - name_start));
    char quote = 0;
    while (i < html.size()) {
        char c = html[i];
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            // Only treat as a quote when it opens an attribute value.
            if (i > 0 && (html[i - 1] == '=' || html[i - 1] == ' ')) {
                quote = c;
            }
        } else if (c == '>') {
            t.self_closing = i > 0 && html[i - 1] == '/';
            t.end = i + 1;
            return t;
        } else if (c == '<' && quote == 0) {
            // Unterminated tag: stop here so the next '<' starts fresh.
            t.end = i;
            return t;
        }
        ++i;
    }
    t.end = html.size();
    return t;
}

/// Index of the closing tag "</name" at or after `from` (case-insensitive), or npos.
std::size_t find_close(std::string_view html, std::size_t from, std::string_view name)
{
    std::string needle = "</" + std::string(name);
    while (from < html.size()) {
        auto p = html.find("</", from);
        if (p == std::string_view::npos) {
            return p;
        }
        if (starts_with_ci(html.substr(p), needle)) {
            auto after = p + needle.size();
            if (after >= html.size() || !is_name_char(html[after])) {
                return p;
            }
        }
        from = p + 2;
    }
    return std::string_view::npos;
}

std::size_t skip_past(std::string_view html, std::size_t from, char c)
{
    auto p = html.find(c, from);
    return p == std::string_view::npos ? html.size() : p + 1;
}

bool looks_binary(std::string_view raw)
{
    auto head = raw.substr(0, 4096);
    if (head.find('\0') != std::string_view::npos) {
        return true;
    }
    if (head.substr(0, 5) == "%PDF-" || head.substr(0, 4) == "\x89PNG" || head.substr(0, 4) == "GIF8" ||
        head.substr(0, 3) == "\xFF\xD8\xFF" || head.substr(0, 2) == "PK") {
        return true;
    }
    std::size_t controls = 0;
    for (unsigned char c : head) {
        controls += c < 0x20 && c != '\n' && c != '\r' && c != '\t' && c != '\f';
    }
    return !head.empty() && controls * 10 > head.size();
}

}  // namespace

std::string decode_entities(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        auto semi = text.find(';', i + 1);
        bool decoded = false;
        if (semi != std::string_view::npos && semi - i <= 12) {
            auto ref = text.substr(i + 1, semi - i - 1);
            if (!ref.empty() && ref[0] == '#') {
                std::uint32_t cp = 0;
                std::from_chars_result r{};
                if (ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X')) {
                    r = std::from_chars(ref.data() + 2, ref.data() + ref.size(), cp, 16);
                } else {
                    r = std::from_chars(ref.data() + 1, ref.data() + ref.size(), cp, 10);
                }
                if (r.ec == std::errc{} && r.ptr == ref.data() + ref.size() && ref.size() > 1) {
                    if (cp >= 0x80 && cp <= 0x9F) {
                        cp = k_c1_fixups[cp - 0x80];
                    }
                    append_utf8(out, cp);
                    decoded = true;
                }
            } else if (auto it = named_entities().find(ref); it != named_entities().end()) {
                append_utf8(out, it->second);
                decoded = true;
            }
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out += '&';
            ++i;
        }
    }
    return out;
}

ExtractedText extract_from_utf8(std::string_view html)
{
    ExtractedText out;
    TextSink body;
    bool have_title = false;
    bool in_head = false;
    std::size_t i = 0;
    auto emit_text = [&](std::size_t from, std::size_t to) {
        if (to <= from || in_head) {
            return;
        }
        body.text(decode_entities(html.substr(from, to - from)));
    };
    std::size_t text_start = 0;
    while (i < html.size()) {
        if (html[i] != '<') {
            ++i;
            continue;
        }
        emit_text(text_start, i);
        if (html.substr(i, 4) == "<!--") {
            auto end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            text_start = i;
            continue;
        }
        if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
            i = skip_past(html, i + 2, '>');
            text_start = i;
            continue;
        }
        auto tag = parse_tag(html, i);
        if (!tag) {
            // A stray '<' is plain text; the sink turns it into a boundary.
            body.text(in_head ? std::string_view{} : std::string_view("<"));
            ++i;
            text_start = i;
            continue;
        }
        i = tag->end;
        text_start = i;
        const auto& name = tag->name;
        if (tag->closing) {
            if (name == "head") {
                in_head = false;
            }
            if (block_elements().count(name)) {
                body.boundary();
            }
            continue;
        }
        if (name == "head") {
            in_head = true;
            continue;
        }
        if (name == "body" || (in_head && !head_elements().count(name))) {
            in_head = false;
        }
        if (name == "title" && !tag->self_closing) {
            auto close = find_close(html, i, "title");
            auto end = close == std::string_view::npos ? html.find('<', i) : close;
            if (end == std::string_view::npos) {
                end = html.size();
            }
            if (!have_title) {
                TextSink t;
                t.text(decode_entities(html.substr(i, end - i)));
                out.title = t.take();
                have_title = true;
            }
            i = close == std::string_view::npos ? end : skip_past(html, close, '>');
            text_start = i;
            body.boundary();
            continue;
        }
        if (skipped_elements().count(name) && !tag->self_closing) {
            auto close = find_close(html, i, name);
            i = close == std::string_view::npos ? html.size() : skip_past(html, close, '>');
            text_start = i;
            body.boundary();
            continue;
        }
        if (block_elements().count(name)) {
            body.boundary();
        }
    }
    emit_text(text_start, html.size());
    out.body = body.take();
    return out;
}

ExtractedText extract_text(std::string_view raw, std::string_view charset_hint, std::size_t max_tokens)
{
    if (looks_binary(raw)) {
        throw ExtractError("payload is not text");
    }
    auto decoded = decode_html(raw, charset_hint);
    auto out = extract_from_utf8(decoded.utf8);
    out.charset = decoded.charset;
    // Truncate the body after the max_tokens-th token.
    std::size_t n = 0;
    bool in_token = false;
    for (std::size_t k = 0; k < out.body.size(); ++k) {
        char c = out.body[k];
        bool a = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        if (a && !in_token) {
            if (n == max_tokens) {
                out.body.resize(k);
                while (!out.body.empty() && out.body.back() == ' ') {
                    out.body.pop_back();
                }
                out.truncated = true;
                break;
            }
            ++n;
        }
        in_token = a;
    }
    return out;
}

}  // namespace snapcorpus::extract
