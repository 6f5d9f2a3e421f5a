#include <gtest/gtest.h>

#include <random>

#include "snapcorpus/extract/charset.hpp"
#include "snapcorpus/extract/html_text.hpp"

using namespace snapcorpus::extract;

TEST(ExtractText, DefinitionalCase)
{
    auto r = extract_text("<html><head><title>Hi</title><script>x()</script></head><body><p>A</p><p>B</p></body></html>");
    EXPECT_EQ(r.title, "Hi");
    EXPECT_EQ(r.body, "A B");
}

TEST(ExtractText, DropsNonContentElements)
{
    auto r = extract_from_utf8(
        "<!DOCTYPE html><html><head><meta charset=utf-8><title> Two \n words </title>"
        "<style>p{color:red}</style><link rel=x></head><body>"
        "<!-- hidden comment --><noscript>enable js</noscript><template><p>tpl</p></template>"
        "Visible<b>Bold</b> <i>text</i><SCRIPT type='text/javascript'>if (a < b) {}</SCRIPT>"
        "<div>end</div></body></html>");
    EXPECT_EQ(r.title, "Two words");
    EXPECT_EQ(r.body, "VisibleBold text end");
}

TEST(ExtractText, MissingTitleIsEmptyAndOnlyFirstTitleCounts)
{
    EXPECT_EQ(extract_from_utf8("<p>no title</p>").title, "");
    auto r = extract_from_utf8("<title>First</title><title>Second</title><p>x</p>");
    EXPECT_EQ(r.title, "First");
    EXPECT_EQ(r.body, "x");
}

TEST(ExtractText, TolerantOfMalformedMarkup)
{
    auto r = extract_from_utf8("<html><body><p>one<p>two 3 < 4 &amp; 5 > 2<div class=\"unterminated>three</div>");
    EXPECT_EQ(r.body.find('<'), std::string::npos);
    EXPECT_NE(r.body.find("one two"), std::string::npos);
    EXPECT_NE(r.body.find("& 5 > 2"), std::string::npos);
    EXPECT_EQ(r.body.find("three"), std::string::npos);

    auto unclosed = extract_from_utf8("<title>T<p>body text");
    EXPECT_EQ(unclosed.title, "T");
    EXPECT_EQ(unclosed.body, "body text");

    EXPECT_EQ(extract_from_utf8("<script>never closed <p>hidden").body, "");
}

TEST(ExtractText, EntitiesDecoded)
{
    EXPECT_EQ(decode_entities("a&amp;b &lt;x&gt; &#65;&#x42; &eacute; &#150; &bogus; &"),
              "a&b <x> AB \xc3\xa9 \xe2\x80\x93 &bogus; &");
    // A decoded &lt; is still never emitted.
    EXPECT_EQ(extract_from_utf8("<p>1 &lt; 2</p>").body, "1 2");
    EXPECT_EQ(extract_from_utf8("<p>a&nbsp;&nbsp;b</p>").body, "a b");
}

TEST(ExtractText, HeadTextIsNotBody)
{
    auto r = extract_from_utf8("<html><head><title>t</title>stray head text</head><body>b</body></html>");
    EXPECT_EQ(r.body, "b");
    // A content tag implicitly ends the head.
    EXPECT_EQ(extract_from_utf8("<head><title>t</title><p>para</p>").body, "para");
}

TEST(ExtractText, BinaryPayloadIsRejected)
{
    EXPECT_THROW(extract_text(std::string("\x89PNG\r\n\x1a\n\0\0", 10)), ExtractError);
    EXPECT_THROW(extract_text(std::string("abc\0def", 7)), ExtractError);
    EXPECT_NO_THROW(extract_text(""));
}

TEST(ExtractText, TruncatesBodyAtTokenCap)
{
    auto r = extract_text("<p>one two three four five</p>", "", 3);
    EXPECT_TRUE(r.truncated);
    EXPECT_EQ(r.body, "one two three");
    EXPECT_FALSE(extract_text("<p>one two</p>", "", 3).truncated);
}

TEST(Charset, ResolutionOrder)
{
    std::string latin1 = "<p>caf\xe9</p>";
    EXPECT_EQ(extract_text(latin1, "text/html; charset=ISO-8859-1").body, "caf\xc3\xa9");
    // Invalid UTF-8 without any declaration falls back to the 8-bit decode.
    auto fallback = extract_text(latin1, "");
    EXPECT_EQ(fallback.body, "caf\xc3\xa9");
    EXPECT_EQ(fallback.charset, "windows-1252");
    // Meta declaration is honoured.
    std::string meta = "<meta http-equiv=\"Content-Type\" content=\"text/html; charset=windows-1252\"><p>\x93q\x94</p>";
    EXPECT_EQ(extract_text(meta, "").body, "\xe2\x80\x9cq\xe2\x80\x9d");
    // A BOM marks UTF-8.
    EXPECT_EQ(extract_text("\xEF\xBB\xBF<p>\xc3\xa9</p>", "").charset, "utf-8");
    // A wrong HTTP hint that cannot decode falls through to the next source.
    EXPECT_EQ(extract_text("<p>\xc3\xa9</p>", "text/html; charset=utf-8").body, "\xc3\xa9");
    EXPECT_EQ(decode_html("<p>\xc3\xa9</p>", "text/html; charset=utf-8").charset, "utf-8");
    // iconv-backed charsets.
    EXPECT_EQ(extract_text("<p>\xd0\xd2\xc9\xd7\xc5\xd4</p>", "text/html; charset=koi8-r").body,
              "\xd0\xbf\xd1\x80\xd0\xb8\xd0\xb2\xd0\xb5\xd1\x82");
}

TEST(Charset, Helpers)
{
    EXPECT_EQ(charset_from_content_type("text/html; Charset=\"UTF-8\""), "utf-8");
    EXPECT_EQ(charset_from_content_type("text/html"), "");
    EXPECT_EQ(sniff_meta_charset("<META CHARSET='Shift_JIS'>"), "shift_jis");
    EXPECT_TRUE(is_valid_utf8("plain \xc3\xa9"));
    EXPECT_FALSE(is_valid_utf8("\xc3"));
    EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));  // surrogate
    EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));      // overlong
}

// Randomized tag soup: output never contains '<' nor any text placed inside a
// script or style element.
TEST(ExtractText, TagSoupProperty)
{
    std::mt19937 rng(99);
    const std::vector<std::string> pieces = {
        "<p>", "</p>", "<div class='a>b'>", "</div>", "<b>", "</i>", "<br/>", "text", " more ",
        "&lt;", "&amp;", "<", ">", "<!-- c -->", "<!--", "<script>SECRETJS</script>",
        "<style>SECRETCSS</style>", "<SCRIPT>SECRETJS", "<title>T</title>", "<a href=\"x\">link</a>",
        "<!DOCTYPE html>", "<?xml ?>", "</", "<x", "\"", "'", "<img src=x>", "<table><tr><td>c</td></tr>",
    };
    for (int i = 0; i < 2000; ++i) {
        std::string html;
        auto n = 1 + rng() % 25;
        for (std::size_t k = 0; k < n; ++k) {
            html += pieces[rng() % pieces.size()];
        }
        auto r = extract_from_utf8(html);
        EXPECT_EQ(r.body.find('<'), std::string::npos) << html;
        EXPECT_EQ(r.title.find('<'), std::string::npos) << html;
        EXPECT_EQ(r.body.find("SECRET"), std::string::npos) << html;
        EXPECT_EQ(r.body.find("  "), std::string::npos) << html;
    }
}
