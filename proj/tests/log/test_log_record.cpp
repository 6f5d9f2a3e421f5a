#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/log/log_record.hpp"

using namespace snapcorpus;
using namespace snapcorpus::log;

namespace {

LogRecord expect_record(const ParsedLine& p)
{
    EXPECT_TRUE(std::holds_alternative<LogRecord>(p));
    return std::holds_alternative<LogRecord>(p) ? std::get<LogRecord>(p) : LogRecord{};
}

}  // namespace

TEST(ParseLogLine, FiveFieldRowWithClick)
{
    auto r = expect_record(parse_log_line("142\tjaguar\t2006-03-01 07:17:12\t1\thttp://www.jaguar.com"));
    EXPECT_EQ(r.user_id, "142");
    EXPECT_EQ(r.query_text, "jaguar");
    EXPECT_EQ(format_log_time(r.query_time), "2006-03-01 07:17:12");
    ASSERT_TRUE(r.click.has_value());
    EXPECT_EQ(r.click->item_rank, 1u);
    EXPECT_EQ(r.click->url, "http://www.jaguar.com");
}

TEST(ParseLogLine, ThreeFieldRowHasNoClick)
{
    auto r = expect_record(parse_log_line("142\tjaguar\t2006-03-01 07:17:12"));
    EXPECT_FALSE(r.click.has_value());
}

TEST(ParseLogLine, TrailingEmptyColumnsMeanNoClick)
{
    auto r = expect_record(parse_log_line("142\tjaguar\t2006-03-01 07:17:12\t\t"));
    EXPECT_FALSE(r.click.has_value());
}

TEST(ParseLogLine, HeaderAndBlankAreSkipped)
{
    EXPECT_TRUE(std::holds_alternative<SkipLine>(parse_log_line(k_log_header)));
    EXPECT_TRUE(std::holds_alternative<SkipLine>(parse_log_line("")));
    EXPECT_TRUE(std::holds_alternative<SkipLine>(parse_log_line("   ")));
}

TEST(ParseLogLine, MalformedLinesCarryLineNumber)
{
    auto bad_time = parse_log_line("1\tq\t2006-02-30 00:00:00", 17);
    ASSERT_TRUE(std::holds_alternative<LineIssue>(bad_time));
    EXPECT_EQ(std::get<LineIssue>(bad_time).line, 17u);

    EXPECT_TRUE(std::holds_alternative<LineIssue>(parse_log_line("1\tq\t2006-03-01 00:00:00\tx\thttp://a.com", 2)));
    EXPECT_TRUE(std::holds_alternative<LineIssue>(parse_log_line("1\tq\t2006-03-01 00:00:00\t0\thttp://a.com", 2)));
    EXPECT_TRUE(std::holds_alternative<LineIssue>(parse_log_line("1\tq\t2006-03-01 00:00:00\t3\t", 2)));
    EXPECT_TRUE(std::holds_alternative<LineIssue>(parse_log_line("1\tq", 2)));
}

// Round-trip oracle: random records serialized with the 5-column schema parse
// back to themselves.
TEST(ParseLogLine, SerializeParseRoundTrip)
{
    std::mt19937 rng(7);
    for (int i = 0; i < 500; ++i) {
        LogRecord r;
        r.user_id = std::to_string(rng() % 100000);
        r.query_text = "q" + std::to_string(rng() % 997) + " term";
        r.query_time = 1141171200 + static_cast<EpochSeconds>(rng() % (90 * 86400));
        if (rng() % 2) {
            r.click = Click{1 + static_cast<std::uint32_t>(rng() % 10), "http://site" + std::to_string(rng() % 50) + ".com"};
        }
        auto line = format_log_line(r);
        EXPECT_EQ(expect_record(parse_log_line(line)), r) << line;
    }
}

TEST(ReadLogFile, GzipAndPlainWithErrorsCounted)
{
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "snapcorpus_test_log";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string text = std::string(k_log_header) + "\n" +
                       "1\ta\t2006-03-01 00:00:00\t1\thttp://a.com\n"
                       "1\tb\tnot-a-time\n"
                       "\n"
                       "2\tc\t2006-03-02 00:00:00\n";
    {
        std::ofstream(dir / "part-01.txt") << text;
        auto gz = gzip::compress(text);
        std::ofstream(dir / "part-02.txt.gz", std::ios::binary).write(gz.data(), static_cast<std::streamsize>(gz.size()));
    }
    auto files = list_log_files(dir);
    ASSERT_EQ(files.size(), 2u);
    ReadStats total;
    std::vector<LogRecord> recs;
    for (const auto& f : files) {
        total.merge(read_log_file(f, [&](LogRecord&& r) { recs.push_back(std::move(r)); }));
    }
    EXPECT_EQ(total.records, 4u);
    EXPECT_EQ(total.malformed, 2u);
    EXPECT_EQ(total.skipped, 4u);
    ASSERT_FALSE(total.samples.empty());
    EXPECT_EQ(total.samples.front().second.line, 3u);
    fs::remove_all(dir);
}
