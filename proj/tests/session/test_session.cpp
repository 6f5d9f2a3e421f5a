#include <gtest/gtest.h>

#include <random>

#include "../support/session_checks.hpp"
#include "snapcorpus/common/error.hpp"
#include "snapcorpus/session/candidates.hpp"
#include "snapcorpus/session/session_file.hpp"
#include "snapcorpus/session/split.hpp"

using namespace snapcorpus;
using namespace snapcorpus::session;

namespace {

constexpr EpochSeconds k_gap = 30 * 60;

log::LogRecord rec(const std::string& user, const std::string& q, EpochSeconds t, const std::string& url = "")
{
    log::LogRecord r{user, q, t, std::nullopt};
    if (!url.empty()) {
        r.click = log::Click{1, url};
    }
    return r;
}

std::optional<std::string> identity(const std::string& url) { return url; }

}  // namespace

TEST(Segment, GapBoundary)
{
    auto one = segment({rec("u", "a", 0), rec("u", "b", 29 * 60 + 59)}, k_gap, identity);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].queries.size(), 2u);

    auto two = segment({rec("u", "a", 0), rec("u", "b", 31 * 60)}, k_gap, identity);
    EXPECT_EQ(two.size(), 2u);

    auto exact = segment({rec("u", "a", 0), rec("u", "b", k_gap)}, k_gap, identity);
    EXPECT_EQ(exact.size(), 2u);
    EXPECT_EQ(exact[1].session_id, "u-1");
}

TEST(Segment, MergesConsecutiveDuplicates)
{
    SegmentStats st;
    auto s = segment({rec("u", "jaguar", 0, "http://a"), rec("u", "jaguar", 10, "http://b"),
                      rec("u", "jaguar", 20, "http://a"), rec("u", "cars", 30), rec("u", "jaguar", 40)},
                     k_gap, identity, &st);
    ASSERT_EQ(s.size(), 1u);
    ASSERT_EQ(s[0].queries.size(), 3u);
    EXPECT_EQ(s[0].queries[0].clicks.size(), 2u);
    EXPECT_EQ(s[0].queries[0].query_time, 0);
    EXPECT_EQ(st.merged_duplicates, 2u);
    EXPECT_EQ(distinct_queries(s[0]), 2u);
}

TEST(Segment, UnresolvedClicksAreDropped)
{
    SegmentStats st;
    auto s = segment({rec("u", "a", 0, "http://gone")}, k_gap,
                     [](const std::string&) -> std::optional<std::string> { return std::nullopt; }, &st);
    EXPECT_TRUE(s[0].queries[0].clicks.empty());
    EXPECT_EQ(st.unresolved_clicks, 1u);
}

TEST(Segment, RejectsUnsortedInput)
{
    EXPECT_THROW(segment({rec("u", "a", 10), rec("u", "b", 5)}, k_gap, identity), DataError);
    EXPECT_THROW(segment({rec("u", "a", 0), rec("v", "b", 0), rec("u", "c", 9)}, k_gap, identity), DataError);
    EXPECT_THROW(segment({}, 0, identity), DataError);
    EXPECT_TRUE(segment({}, k_gap, identity).empty());
}

TEST(FilterSessions, MinimumDistinctQueries)
{
    auto s = segment({rec("u", "a", 0), rec("v", "a", 0), rec("v", "b", 1)}, k_gap, identity);
    std::size_t dropped = 0;
    auto kept = filter_sessions(s, 2, &dropped);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].user_id, "v");
    EXPECT_EQ(dropped, 1u);
}

TEST(SplitByDate, AssignmentAndDiscards)
{
    SplitSpec spec{parse_date_range("2006-03-01/2006-04-01"), parse_date_range("2006-04-01/2006-04-15"),
                   parse_date_range("2006-05-01/2006-06-01")};
    auto t = [](const char* s) { return *parse_log_time(s); };
    auto sessions = segment({rec("a", "q", t("2006-03-31 23:59:59")), rec("b", "q", t("2006-04-01 00:00:00")),
                             rec("c", "q", t("2006-04-20 12:00:00")), rec("d", "q", t("2006-05-10 08:00:00"))},
                            k_gap, identity);
    auto r = split_by_date(sessions, spec);
    ASSERT_EQ(r.sessions.size(), 3u);
    EXPECT_EQ(r.sessions[0].split, Split::train);
    EXPECT_EQ(r.sessions[1].split, Split::dev);
    EXPECT_EQ(r.sessions[2].split, Split::test);
    EXPECT_EQ(r.discarded, 1u);

    SplitSpec overlap{parse_date_range("2006-03-01/2006-04-02"), parse_date_range("2006-04-01/2006-04-15"),
                      parse_date_range("2006-05-01/2006-06-01")};
    EXPECT_THROW(split_by_date(sessions, overlap), DataError);
    EXPECT_THROW(parse_date_range("2006-03-01"), DataError);
    EXPECT_THROW(parse_date_range("2006-03-02/2006-03-01"), DataError);
}

TEST(DatasetStats, CountsAndDeltas)
{
    DatasetStats empty;
    EXPECT_DOUBLE_EQ(empty.train.avg_queries(), 0.0);

    DatasetStats base;
    base.train = {219748, 566967};
    DatasetStats cur;
    cur.train = {311877, 1099568};
    EXPECT_EQ(percent_delta(cur.train.sessions, base.train.sessions), "+42 %");
    EXPECT_EQ(percent_delta(cur.train.queries, base.train.queries), "+94 %");
    EXPECT_EQ(percent_delta(5, 5), "+0 %");
    EXPECT_EQ(percent_delta(5, 0), "n/a");
    auto table = format_dataset_stats(cur, base);
    EXPECT_NE(table.find("avg_queries_per_session\t2.58\t3.53\t+37 %"), std::string::npos) << table;
    auto same = format_dataset_stats(cur, cur);
    EXPECT_NE(same.find("+0 %"), std::string::npos);
}

TEST(SessionFile, RoundTrip)
{
    Session s{"u\t1-0", "u\t1", {{"jaguar\\cars", 1141200000, {{"0123456789ab", 3}, {"ba9876543210", 1}}},
                                 {"weather", 1141200100, {}}},
              Split::test};
    Session t{"v-2", "v", {{"x", 5, {}}}, Split::train};
    auto text = encode_sessions({s, t});
    EXPECT_EQ(decode_sessions(text), (std::vector<Session>{s, t}));
    EXPECT_EQ(encode_sessions(decode_sessions(text)), text);

    auto bare = decode_sessions("v-0\tv\tdev\t0\tq\t7\tabc,def\n");
    EXPECT_EQ(bare[0].queries[0].clicks[1].doc_id, "def");
    EXPECT_EQ(bare[0].queries[0].clicks[1].item_rank, 0u);

    try {
        decode_sessions("v-0\tv\tdev\t0\tq\t7\t\nv-0\tv\tdev\t2\tq\t8\t\n");
        FAIL();
    } catch (const LineError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(decode_sessions("v-0\tv\tdev\t0\tq\tseven\t\n"), LineError);
    EXPECT_THROW(decode_sessions("v-0\tv\tholdout\t0\tq\t7\t\n"), LineError);
}

TEST(SessionInvariants, RandomLogs)
{
    std::mt19937 rng(2006);
    const EpochSeconds start = *parse_date("2006-03-01");
    SplitSpec spec{parse_date_range("2006-03-01/2006-04-15"), parse_date_range("2006-04-15/2006-05-01"),
                   parse_date_range("2006-05-01/2006-05-20")};
    for (int trial = 0; trial < 3; ++trial) {
        auto records = checks::random_log(rng, 3000, 40, k_gap, start);
        auto sessions = segment(records, k_gap, identity);
        EXPECT_EQ(checks::check_sessions(sessions, 1), "");
        EXPECT_EQ(checks::check_boundaries(records, sessions, k_gap), "");
        auto kept = filter_sessions(sessions, 2);
        EXPECT_EQ(checks::check_sessions(kept, 2), "");
        auto r = split_by_date(kept, spec);
        EXPECT_EQ(checks::check_partition(kept, r.sessions, spec), "");
        EXPECT_EQ(r.sessions.size() + r.discarded, kept.size());

        // Processing users in a different order yields the same sessions.
        std::map<std::string, std::vector<log::LogRecord>> by_user;
        for (const auto& rec : records) {
            by_user[rec.user_id].push_back(rec);
        }
        std::vector<log::LogRecord> reordered;
        for (auto it = by_user.rbegin(); it != by_user.rend(); ++it) {
            reordered.insert(reordered.end(), it->second.begin(), it->second.end());
        }
        auto again = filter_sessions(segment(reordered, k_gap, identity), 2);
        auto key = [](std::vector<Session> v) {
            std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
            return v;
        };
        EXPECT_EQ(key(again), key(kept));
    }
}

TEST(Candidates, ForcedInclusionAndLabels)
{
    auto idx = rank::build_index({{"d1", {"jaguar", "car"}},
                                  {"d2", {"jaguar", "jaguar", "speed"}},
                                  {"d3", {"lion"}},
                                  {"d4", {"car", "dealer"}},
                                  {"d5", {"zoo", "cat", "lion"}}});
    // Brute force: jaguar scores d2 > d1 > 0; others 0 and unmatched.
    auto c = build_candidates("q", {"jaguar"}, idx, {"d5"}, 1);
    ASSERT_TRUE(c);
    ASSERT_EQ(c->candidates.size(), 2u);
    EXPECT_EQ(c->candidates[0].doc_id, "d2");
    EXPECT_EQ(c->candidates[1].doc_id, "d5");
    EXPECT_EQ(c->forced, 1u);
    for (const auto& q : c->qrels) {
        EXPECT_EQ(q.relevance, q.doc_id == "d5" ? 1 : 0);
    }

    auto top1 = build_candidates("q", {"jaguar"}, idx, {"d2"}, 1);
    ASSERT_EQ(top1->candidates.size(), 1u);
    EXPECT_EQ(top1->forced, 0u);

    auto k3 = build_candidates("q", {"jaguar", "lion"}, idx, {}, 3);
    std::vector<std::pair<double, std::string>> brute;
    for (const auto* d : {"d1", "d2", "d3", "d4", "d5"}) {
        brute.emplace_back(rank::bm25_score({"jaguar", "lion"}, d, idx), d);
    }
    std::sort(brute.rbegin(), brute.rend());
    ASSERT_EQ(k3->candidates.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(k3->candidates[i].doc_id, brute[i].second);
    }

    EXPECT_FALSE(build_candidates("q", {"unknown"}, idx, {}, 5));
    EXPECT_FALSE(build_candidates("q", {"unknown"}, idx, {"not-indexed"}, 5));
}

TEST(Candidates, EveryRelevantDocIsACandidate)
{
    std::mt19937 rng(12);
    std::vector<std::pair<std::string, rank::TokenSeq>> docs;
    for (int i = 0; i < 60; ++i) {
        docs.push_back({"d" + std::to_string(i), {"w" + std::to_string(rng() % 15), "w" + std::to_string(rng() % 15)}});
    }
    auto idx = rank::build_index(docs);
    std::vector<Session> sessions;
    for (int s = 0; s < 20; ++s) {
        Session x{"u-" + std::to_string(s), "u", {}, Split::test};
        for (int q = 0; q < 3; ++q) {
            x.queries.push_back({"w" + std::to_string(rng() % 20), 0, {{"d" + std::to_string(rng() % 70), 1}}});
        }
        sessions.push_back(x);
    }
    CandidateStats st;
    auto all = build_split_candidates(sessions, Split::test, idx, 5, {}, &st);
    std::set<std::pair<std::string, std::string>> cand;
    for (const auto& c : all.candidates) {
        cand.emplace(c.query_id, c.doc_id);
    }
    for (const auto& q : all.qrels) {
        EXPECT_TRUE(cand.count({q.query_id, q.doc_id})) << q.query_id << " " << q.doc_id;
    }
    EXPECT_EQ(st.queries, 60u);
    EXPECT_EQ(all.qrels.size(), all.candidates.size());
}
