// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is 0
// only when every selected criterion passes or is skipped.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "../support/oracles.hpp"
#include "../support/session_checks.hpp"
#include "snapcorpus/archive/client.hpp"
#include "snapcorpus/archive/mapping.hpp"
#include "snapcorpus/archive/mock_archive.hpp"
#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/diff/jaccard.hpp"
#include "snapcorpus/diff/set_report.hpp"
#include "snapcorpus/extract/document.hpp"
#include "snapcorpus/log/universe.hpp"
#include "snapcorpus/pipeline/cli.hpp"
#include "snapcorpus/pipeline/config.hpp"
#include "snapcorpus/rank/bm25.hpp"
#include "snapcorpus/rank/measures.hpp"
#include "snapcorpus/rank/significance.hpp"
#include "snapcorpus/session/session_file.hpp"

using namespace snapcorpus;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

struct Options {
    bool full_data = false;
    fs::path fixture;
    fs::path data;
    fs::path full_config;
    fs::path aol17_dir;
    fs::path scratch;
};

struct Outcome {
    bool pass = false;
    std::string detail;
    bool skipped = false;
};

struct Criterion {
    std::string id;
    std::string title;
    double budget_seconds;
    std::function<Outcome(const Options&)> run;
};

std::string read_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Collects sub-check failures; the criterion passes when none were noted.
struct Checks {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            failures.push_back(what);
        }
    }
    Outcome outcome() const
    {
        std::string d;
        for (const auto& f : failures) {
            d += (d.empty() ? "" : "; ") + f;
        }
        for (const auto& n : notes) {
            d += (d.empty() ? "" : "; ") + n;
        }
        return {failures.empty(), d};
    }
};

// ---------------------------------------------------------------------------

Outcome jaccard_golden(const Options& o)
{
    Checks c;
    auto text = read_bytes(o.data / "golden" / "title_pairs.tsv");
    std::size_t row = 0;
    double worst = 0;
    for (auto line : split(text, '\n')) {
        if (line.empty()) {
            continue;
        }
        ++row;
        auto f = split(line, '\t');
        c.expect(f.size() == 3, "row " + std::to_string(row) + " malformed");
        if (f.size() != 3) {
            continue;
        }
        double expected = std::stod(std::string(f[2]));
        double got = diff::title_jaccard(std::string(f[0]), std::string(f[1]));
        worst = std::max(worst, std::fabs(got - expected));
        c.expect(std::fabs(got - expected) <= 0.05,
                 "row " + std::to_string(row) + ": " + fmt("%.3f", got) + " vs " + fmt("%.1f", expected));
    }
    c.expect(row == 10, "expected 10 rows, found " + std::to_string(row));
    c.notes.push_back(std::to_string(row) + " pairs, max deviation " + fmt("%.3f", worst));
    return c.outcome();
}

Outcome set_algebra(const Options&)
{
    Checks c;
    const std::size_t a = 1'525'524, b = 897'984, inter = 885'777, universe = 1'632'620;
    std::vector<std::string> ka, kb;
    char buf[16];
    // A = [0, a), B = [a - inter, a - inter + b) over a numbered universe.
    for (std::size_t i = 0; i < a; ++i) {
        std::snprintf(buf, sizeof buf, "u%07zu", i);
        ka.emplace_back(buf);
    }
    for (std::size_t i = a - inter; i < a - inter + b; ++i) {
        std::snprintf(buf, sizeof buf, "u%07zu", i);
        kb.emplace_back(buf);
    }
    auto r = diff::set_report({"A", std::move(ka)}, {"B", std::move(kb)}, universe);
    c.expect(r.union_size == 1'537'731, "union " + std::to_string(r.union_size));
    c.expect(r.union_size == r.a + r.b - r.intersection, "union identity");
    c.expect(r.a_minus_b == 639'747 && r.b_minus_a == 12'207, "differences");
    const std::vector<std::pair<std::size_t, double>> printed = {
        {r.a, 93.4}, {r.b, 55.0}, {r.b_minus_a, 0.7}, {r.a_minus_b, 39.2}, {r.union_size, 94.2}, {r.intersection, 54.3}};
    for (const auto& [n, pct] : printed) {
        auto rounded = std::round(r.percent(n) * 10.0) / 10.0;
        c.expect(std::fabs(rounded - pct) < 1e-9, std::to_string(n) + " is " + fmt("%.1f%%", rounded) + " not " +
                                                      fmt("%.1f%%", pct));
    }

    std::mt19937 rng(1632620);
    for (int trial = 0; trial < 1000; ++trial) {
        std::set<std::string> sa, sb;
        auto range = 1 + rng() % 200;
        for (auto n = rng() % 150; n > 0; --n) {
            sa.insert("k" + std::to_string(rng() % range));
        }
        for (auto n = rng() % 150; n > 0; --n) {
            sb.insert("k" + std::to_string(rng() % range));
        }
        std::vector<std::string> both;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
        std::set<std::string> all(sa);
        all.insert(sb.begin(), sb.end());
        std::vector<std::string> va(sa.begin(), sa.end()), vb(sb.begin(), sb.end());
        // Duplicates in the raw key lists must not change the counts.
        if (!va.empty()) {
            va.push_back(va.front());
        }
        auto rr = diff::set_report({"a", va}, {"b", vb}, all.size() + rng() % 5);
        if (rr.intersection != both.size() || rr.union_size != all.size() ||
            rr.union_size != rr.a + rr.b - rr.intersection || rr.a != sa.size() || rr.b != sb.size()) {
            c.expect(false, "random pair " + std::to_string(trial) + " breaks the union identity");
            break;
        }
    }
    c.notes.push_back("union 1,537,731; 1000 random pairs exact");
    return c.outcome();
}

Outcome measure_oracle(const Options&)
{
    Checks c;
    std::mt19937 rng(100);
    double worst = 0;
    std::size_t permutations = 0;
    for (int i = 0; i < 100 && c.failures.empty(); ++i) {
        auto inst = oracle::random_instance(rng);
        auto want = oracle::measures(inst.run, inst.qrels);
        auto got = rank::evaluate(inst.run, inst.qrels);
        if (got.per_query.size() != want.per_query.size()) {
            c.expect(false, "instance " + std::to_string(i) + ": query count differs");
            break;
        }
        for (const auto& [q, m] : want.per_query) {
            const auto& g = got.per_query.at(q);
            worst = std::max({worst, std::fabs(g.ap - m.ap), std::fabs(g.rr - m.rr), std::fabs(g.p1 - m.p1)});
        }
        worst = std::max({worst, std::fabs(got.map - want.map), std::fabs(got.mrr - want.mrr),
                          std::fabs(got.p1 - want.p1)});
        for (int p = 0; p < 5; ++p) {
            auto shuffled = inst.run;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (auto& e : shuffled) {
                e.rank = static_cast<int>(rng() % 100);
            }
            auto again = rank::evaluate(shuffled, inst.qrels);
            ++permutations;
            bool same = again.map == got.map && again.mrr == got.mrr && again.p1 == got.p1;
            for (const auto& [q, m] : got.per_query) {
                const auto& g = again.per_query.at(q);
                same = same && g.ap == m.ap && g.rr == m.rr && g.p1 == m.p1;
            }
            c.expect(same, "instance " + std::to_string(i) + ": permutation changed a measure");
        }
    }
    c.expect(worst <= 1e-9, "max deviation " + fmt("%.3g", worst));
    c.notes.push_back("100 instances, " + std::to_string(permutations) + " permutations, max deviation " +
                      fmt("%.2g", worst));
    return c.outcome();
}

Outcome bm25(const Options&)
{
    Checks c;
    const std::map<std::string, std::vector<std::string>> toy = {
        {"d1", {"jaguar", "car"}}, {"d2", {"jaguar", "jaguar", "speed"}}, {"d3", {"lion"}}};
    std::vector<std::pair<std::string, rank::TokenSeq>> docs(toy.begin(), toy.end());
    auto idx = rank::build_index(docs);
    const rank::TokenSeq q = {"jaguar"};
    // Hand derivation: N = 3, df(jaguar) = 2, idf = max(0, ln(1.5 / 2.5)) = 0,
    // so every document scores exactly 0.
    const std::map<std::string, double> hand = {{"d1", 0.0}, {"d2", 0.0}, {"d3", 0.0}};
    for (const auto& [d, v] : hand) {
        auto got = rank::bm25_score(q, d, idx);
        c.expect(std::fabs(got - v) <= 1e-6, d + " scores " + fmt("%.6f", got));
        c.expect(std::fabs(got - oracle::bm25(q, toy, d)) <= 1e-12, d + " differs from brute force");
    }
    std::vector<std::pair<double, std::string>> exhaustive;
    for (const auto& [d, toks] : toy) {
        exhaustive.emplace_back(oracle::bm25(q, toy, d), d);
    }
    std::sort(exhaustive.begin(), exhaustive.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second > y.second;
    });
    auto ranked = rank::rerank("q", q, {"d1", "d2", "d3"}, idx);
    std::string got_order, brute_order;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        got_order += (i ? "," : "") + ranked[i].doc_id;
        brute_order += (i ? "," : "") + exhaustive[i].second;
    }
    c.expect(got_order == brute_order, "rerank [" + got_order + "] differs from exhaustive [" + brute_order + "]");
    c.expect(got_order == "d2,d1,d3", "ranking is [" + got_order + "], expected [d2,d1,d3]: idf(jaguar) floors to "
                                      "0, all scores tie at 0, ties go to doc_id descending");

    // Monotonicity: add one occurrence of a query term to one document.
    std::mt19937 rng(500);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
    std::size_t violations = 0;
    double worst = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::pair<std::string, rank::TokenSeq>> corpus;
        auto n = 4 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            rank::TokenSeq toks;
            for (auto len = 1 + rng() % 8; len > 0; --len) {
                toks.push_back(vocab[rng() % vocab.size()]);
            }
            corpus.emplace_back("d" + std::to_string(i), toks);
        }
        rank::TokenSeq query;
        for (auto len = 1 + rng() % 3; len > 0; --len) {
            query.push_back(vocab[rng() % vocab.size()]);
        }
        auto target = rng() % n;
        auto id = corpus[target].first;
        auto before = rank::bm25_score(query, id, rank::build_index(corpus));
        corpus[target].second.push_back(query[rng() % query.size()]);
        auto after = rank::bm25_score(query, id, rank::build_index(corpus));
        if (after < before - 1e-12) {
            ++violations;
            worst = std::max(worst, before - after);
        }
    }
    c.expect(violations == 0, "monotonicity violated in " + std::to_string(violations) +
                                  "/500 perturbations (multi-term queries; largest drop " + fmt("%.4f", worst) + ")");
    return c.outcome();
}

Outcome t_distribution(const Options&)
{
    Checks c;
    // n = 10 pairs gives 9 degrees of freedom.
    auto p = rank::student_t_two_sided_p(2.262, 9);
    auto ref = oracle::t_two_sided_p(2.262, 9);
    c.expect(std::fabs(p - ref) <= 1e-3, "p " + fmt("%.6f", p) + " vs integrated " + fmt("%.6f", ref));
    c.notes.push_back("p(t=2.262, df=9) = " + fmt("%.5f", p) + ", integrated " + fmt("%.5f", ref));

    std::mt19937 rng(9);
    std::normal_distribution<double> noise(0.0, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::map<std::string, double> a, b;
        auto n = 2 + rng() % 30;
        double shift = noise(rng) * 0.3;
        for (std::size_t i = 0; i < n; ++i) {
            auto q = "q" + std::to_string(i);
            a[q] = noise(rng);
            b[q] = a[q] + shift + noise(rng) * 0.5;
        }
        auto ab = rank::paired_ttest(a, b);
        auto ba = rank::paired_ttest(b, a);
        if (ab.t != -ba.t || ab.p != ba.p) {
            c.expect(false, "asymmetric result at trial " + std::to_string(trial));
            break;
        }
        auto df = static_cast<double>(n - 1);
        worst = std::max(worst, std::fabs(ab.p - oracle::t_two_sided_p(ab.t, df)));
    }
    c.expect(worst <= 1e-3, "random p deviates by " + fmt("%.2g", worst));

    // Degenerate variance: constant differences.
    std::map<std::string, double> x, y, z;
    for (int i = 0; i < 8; ++i) {
        auto q = "q" + std::to_string(i);
        x[q] = 0.1 * i;
        y[q] = 0.1 * i + 0.25;
        z[q] = 0.1 * i;
    }
    auto shifted = rank::paired_ttest(x, y);
    c.expect(shifted.p == 0.0 && std::isinf(shifted.t) && shifted.t < 0, "constant nonzero difference");
    auto equal = rank::paired_ttest(x, z);
    c.expect(equal.p == 1.0, "identical systems give p " + fmt("%g", equal.p));
    auto m = rank::significance_matrix({{"s1", x}, {"s2", z}});
    c.expect(m.pairs.size() == 1 && m.pairs[0].adjusted_p == 1.0 && !m.pairs[0].significant,
             "identical systems must be non-significant after correction");
    return c.outcome();
}

Outcome sessions(const Options&)
{
    Checks c;
    const EpochSeconds gap = 30 * 60;
    std::mt19937 rng(10000);
    auto records = checks::random_log(rng, 10000, 100, gap, *parse_date("2006-03-01"));
    session::ClickResolver resolve = [](const std::string& u) -> std::optional<std::string> {
        return md5_hex(u).substr(0, 12);
    };
    auto all = session::segment(records, gap, resolve);
    c.expect(checks::check_sessions(all, 1).empty(), checks::check_sessions(all, 1));
    c.expect(checks::check_boundaries(records, all, gap).empty(), checks::check_boundaries(records, all, gap));
    auto kept = session::filter_sessions(all, 2);
    c.expect(checks::check_sessions(kept, 2).empty(), checks::check_sessions(kept, 2));
    session::SplitSpec spec{session::parse_date_range("2006-03-01/2006-04-15"),
                            session::parse_date_range("2006-04-15/2006-05-01"),
                            session::parse_date_range("2006-05-01/2006-05-25")};
    auto split = session::split_by_date(kept, spec);
    c.expect(checks::check_partition(kept, split.sessions, spec).empty(),
             checks::check_partition(kept, split.sessions, spec));
    c.expect(split.sessions.size() + split.discarded == kept.size(), "split counts do not add up");

    auto rec = [](EpochSeconds t, const char* q) { return log::LogRecord{"u", q, t, std::nullopt}; };
    auto at = session::segment({rec(0, "a"), rec(gap, "b")}, gap, resolve);
    auto below = session::segment({rec(0, "a"), rec(gap - 1, "b")}, gap, resolve);
    c.expect(at.size() == 2, "a gap of exactly the threshold must start a new session");
    c.expect(below.size() == 1, "a gap just below the threshold must not split");
    c.notes.push_back(std::to_string(records.size()) + " records, " + std::to_string(all.size()) + " sessions, " +
                      std::to_string(kept.size()) + " kept");
    return c.outcome();
}

Outcome fetcher(const Options& o)
{
    Checks c;
    archive::MockArchive mock;
    mock.load_directory(o.fixture / "archive");
    mock.add_capture("http://forced.example", {"20040101000000", 200, true, "old", "text/html"});
    mock.add_capture("http://forced.example", {"20060301000000", 200, true, "new", "text/html"});
    mock.set_closest("http://forced.example", "20040101000000");
    mock.start();

    archive::FetchPolicy fast;
    fast.max_concurrency = 4;
    fast.min_request_interval_per_host = 0ms;
    fast.max_retries = 3;
    fast.backoff_base = 1ms;
    fast.request_timeout = 3000ms;

    // Closest capture is passed through as reported, even when it is not the
    // nearest in time.
    archive::ArchiveClient client(mock.availability_endpoint(), fast);
    auto forced = client.query_availability("http://forced.example");
    c.expect(forced.disposition == archive::Disposition::located && forced.snapshot &&
                 forced.snapshot->timestamp == "20040101000000",
             "reported closest capture was not passed through");
    std::map<std::string, std::string> golden;
    const auto golden_text = read_bytes(o.fixture / "golden" / "mapping.tsv");
    for (auto line : split(golden_text, '\n')) {
        auto f = split(line, '\t');
        if (f.size() == 4) {
            golden[std::string(f[1])] = std::string(f[2]);
        }
    }
    std::size_t checked = 0;
    for (const auto& [url, ts] : golden) {
        if (checked++ == 20) {
            break;
        }
        auto out = client.query_availability(url);
        c.expect(out.snapshot && out.snapshot->timestamp == ts &&
                     out.snapshot->archive_url == mock.base_url() + "/web/" + ts + "/" + url,
                 "closest capture of " + url);
    }

    // Politeness: request start times to one host are spaced by the interval.
    auto polite = fast;
    polite.min_request_interval_per_host = 40ms;
    archive::ArchiveClient slow(mock.availability_endpoint(), polite);
    std::vector<std::string> urls;
    for (const auto& [url, ts] : golden) {
        if (urls.size() < 12) {
            urls.push_back(url);
        }
    }
    auto audit_dir = o.scratch / "fetcher";
    fs::remove_all(audit_dir);
    fs::create_directories(audit_dir);
    mock.clear_requests();
    archive::run_lookups(slow, urls, audit_dir / "polite.journal");
    auto log = mock.requests();
    long min_gap_us = 1'000'000;
    for (std::size_t i = 1; i < log.size(); ++i) {
        min_gap_us = std::min<long>(
            min_gap_us, std::chrono::duration_cast<std::chrono::microseconds>(log[i].at - log[i - 1].at).count());
    }
    // 5 ms allowance for loopback scheduling jitter between client and server.
    c.expect(log.size() == urls.size() && min_gap_us >= 35'000,
             "politeness gap " + std::to_string(min_gap_us / 1000) + " ms under the 40 ms interval");

    // Retry schedule: two 503s, then success.
    auto retry_policy = fast;
    retry_policy.backoff_base = 50ms;
    archive::ArchiveClient retrying(mock.availability_endpoint(), retry_policy);
    std::vector<std::chrono::milliseconds> sleeps;
    retrying.set_backoff_sleep([&](std::chrono::milliseconds d) { sleeps.push_back(d); });
    mock.fail_next("/wayback/available", 2, 503);
    auto retried = retrying.query_availability(urls.front());
    c.expect(retried.disposition == archive::Disposition::located && retried.attempts == 3,
             "retry did not recover after two 503s");
    c.expect(sleeps.size() == 2 && sleeps[0] >= 50ms && sleeps[0] < 75ms && sleeps[1] >= 100ms && sleeps[1] < 150ms,
             "backoff schedule is not base * 2^(n-1) with up to 50% jitter");
    mock.fail_next("/wayback/available", 10, 503);
    auto exhausted = retrying.query_availability(urls.front());
    c.expect(exhausted.disposition == archive::Disposition::deferred && exhausted.attempts == 4,
             "exhausted retries must defer after 1 + max_retries attempts");

    // Kill and resume in both phases against an uninterrupted crawl.
    auto universe = log::read_universe(o.fixture / "golden" / "universe.tsv").urls();
    auto crawl = [&](const fs::path& dir, bool interrupt) {
        fs::create_directories(dir);
        archive::ArchiveClient cl(mock.availability_endpoint(), fast);
        archive::RawStore store(dir / "raw");
        if (interrupt) {
            archive::CrawlControl stop{60, {}};
            auto s = archive::run_lookups(cl, universe, dir / "lookup.journal", stop);
            c.expect(s.interrupted, "lookup crawl was not interrupted");
            // A write cut short by the kill leaves half a line behind.
            std::ofstream(dir / "lookup.journal", std::ios::app) << "http://www.half";
        }
        archive::run_lookups(cl, universe, dir / "lookup.journal");
        auto located = archive::mapping_from_lookups(archive::read_journal(dir / "lookup.journal"));
        if (interrupt) {
            archive::CrawlControl stop{75, {}};
            archive::run_fetches(cl, located, dir / "fetch.journal", store, stop);
        }
        archive::run_fetches(cl, located, dir / "fetch.journal", store);
        auto rows = archive::mapping_from_fetches(archive::read_journal(dir / "fetch.journal"), located);
        archive::write_mapping(rows, dir / "mapping.tsv.gz");
        return read_bytes(dir / "mapping.tsv.gz");
    };
    auto straight = crawl(audit_dir / "straight", false);
    auto resumed = crawl(audit_dir / "resumed", true);
    c.expect(!straight.empty() && straight == resumed, "resumed mapping differs from the uninterrupted one");
    auto rows = archive::decode_mapping(straight);
    c.expect(rows.size() == golden.size(), "mapping has " + std::to_string(rows.size()) + " rows, expected " +
                                               std::to_string(golden.size()));
    mock.stop();
    fs::remove_all(audit_dir);
    c.notes.push_back(std::to_string(rows.size()) + " mapping rows byte-identical after kill and resume; min gap " +
                      std::to_string(min_gap_us / 1000) + " ms");
    return c.outcome();
}

Outcome formats(const Options& o)
{
    Checks c;
    std::mt19937 rng(77);
    auto word = [&](std::size_t len) {
        static const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789";
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            s += chars[rng() % chars.size()];
        }
        return s;
    };

    std::vector<archive::ArchiveMapping> mapping;
    for (int i = 0; i < 300; ++i) {
        auto url = "http://" + word(8) + ".com/" + word(rng() % 6) + "?q=" + word(3);
        auto ts = "2006" + std::to_string(10 + rng() % 3) + "01120000";
        mapping.push_back({md5_hex(url).substr(0, 12), url, ts, "http://web.archive.org/web/" + ts + "/" + url});
    }
    auto bytes = archive::encode_mapping(mapping);
    auto shuffled = mapping;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    c.expect(archive::encode_mapping(shuffled) == bytes, "mapping bytes depend on row order");
    auto decoded = archive::decode_mapping(bytes);
    auto sorted = mapping;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
    c.expect(decoded == sorted, "mapping round trip");
    auto dir = o.scratch / "formats";
    fs::create_directories(dir);
    archive::write_mapping(mapping, dir / "m1.tsv.gz");
    archive::write_mapping(shuffled, dir / "m2.tsv.gz");
    c.expect(read_bytes(dir / "m1.tsv.gz") == read_bytes(dir / "m2.tsv.gz"), "mapping files differ across writes");

    std::vector<rank::RunEntry> run;
    std::vector<rank::QrelEntry> qrels;
    for (int q = 0; q < 20; ++q) {
        for (int d = 0; d < 15; ++d) {
            auto qid = "s" + std::to_string(q) + "_0";
            auto did = word(12);
            run.push_back({qid, did, d + 1, static_cast<double>(rng() % 4096) / 8.0 - 200.0, "bm25"});
            qrels.push_back({qid, did, static_cast<int>(rng() % 3)});
        }
    }
    rank::write_run(run, dir / "r.run");
    rank::write_qrels(qrels, dir / "q.txt");
    c.expect(rank::read_run(dir / "r.run") == run, "run round trip");
    c.expect(rank::read_qrels(dir / "q.txt") == qrels, "qrels round trip");

    std::vector<session::Session> sessions;
    for (int s = 0; s < 40; ++s) {
        session::Session x{"u" + std::to_string(s) + "-" + std::to_string(s % 3), "u" + std::to_string(s), {},
                           static_cast<session::Split>(1 + s % 3)};
        for (auto n = 1 + rng() % 4; n > 0; --n) {
            session::SessionQuery q{word(5) + (rng() % 4 == 0 ? "\tx\\y\nz" : " " + word(4)),
                                    1141171200 + static_cast<EpochSeconds>(rng() % 8000000), {}};
            for (auto k = rng() % 3; k > 0; --k) {
                q.clicks.push_back({word(12), static_cast<std::uint32_t>(1 + rng() % 10)});
            }
            x.queries.push_back(q);
        }
        sessions.push_back(x);
    }
    session::write_sessions(sessions, dir / "sessions.tsv");
    c.expect(session::read_sessions(dir / "sessions.tsv") == sessions, "session round trip");
    fs::remove_all(dir);
    c.notes.push_back("mapping, run, qrels and session files round-trip; mapping bytes stable");
    return c.outcome();
}

std::map<std::string, std::vector<std::string>> read_table(const fs::path& p, bool skip_comments = true)
{
    std::map<std::string, std::vector<std::string>> out;
    const auto text = read_bytes(p);
    for (auto line : split(text, '\n')) {
        if (line.empty() || (skip_comments && line.front() == '#')) {
            continue;
        }
        auto f = split(line, '\t');
        std::vector<std::string> rest;
        for (std::size_t i = 1; i < f.size(); ++i) {
            rest.emplace_back(f[i]);
        }
        out[std::string(f[0])] = rest;
    }
    return out;
}

/// Every regular file under `root` except crawl journals, by relative path.
std::map<std::string, std::string> artifact_bytes(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path().extension() != ".journal") {
            out[fs::relative(e.path(), root).generic_string()] = read_bytes(e.path());
        }
    }
    return out;
}

Outcome end_to_end(const Options& o)
{
    Checks c;
    archive::MockArchive mock;
    mock.load_directory(o.fixture / "archive");
    mock.start();
    auto conf = (o.fixture / "snapcorpus.conf").string();
    auto run_into = [&](const fs::path& work, std::vector<std::string> extra) {
        std::vector<std::string> args = {"--config", conf, "--set", "work_dir=" + work.string(), "--mock-endpoint",
                                         mock.base_url()};
        args.insert(args.end(), extra.begin(), extra.end());
        std::ostringstream out, err;
        int code = pipeline::run_cli(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
    };
    auto w1 = o.scratch / "e2e_1";
    auto w2 = o.scratch / "e2e_2";
    fs::remove_all(w1);
    fs::remove_all(w2);

    auto [early, early_out, early_err] = run_into(w1, {"eval"});
    c.expect(early == pipeline::k_exit_data && early_err.find("run `rerank` first") != std::string::npos,
             "eval before rerank must exit 2 with a rerank hint");

    auto [code, out, err] = run_into(w1, {"all"});
    c.expect(code == 0, "pipeline exit " + std::to_string(code) + ": " + err);
    if (code != 0) {
        mock.stop();
        return c.outcome();
    }
    const auto g = o.fixture / "golden";
    c.expect(read_bytes(w1 / "universe.tsv") == read_bytes(g / "universe.tsv"), "universe differs from golden");
    c.expect(read_bytes(w1 / "languages.tsv") == read_bytes(g / "languages.tsv"), "languages differ from golden");

    std::string mapping_text;
    for (const auto& r : archive::read_mapping(w1 / "mapping.tsv.gz")) {
        auto path = r.archive_url.substr(r.archive_url.find("/web/"));
        mapping_text += r.doc_id + "\t" + r.original_url + "\t" + r.timestamp + "\t" + path + "\n";
    }
    c.expect(mapping_text == read_bytes(g / "mapping.tsv"), "mapping differs from golden");

    auto sets = read_table(w1 / "diff" / "set_report.tsv");
    auto want_sets = read_table(g / "set_report.tsv");
    auto count = [&](const char* row) { return sets.count(row) ? sets[row].at(0) : std::string("?"); };
    c.expect(count("current") == want_sets["|A|"].at(0) && count("old") == want_sets["|B|"].at(0) &&
                 count("current \\ old") == want_sets["|A \\ B|"].at(0) &&
                 count("old \\ current") == want_sets["|B \\ A|"].at(0) &&
                 count("current ∪ old") == want_sets["|A ∪ B|"].at(0) &&
                 count("current ∩ old") == want_sets["|A ∩ B|"].at(0),
             "set report differs from golden");

    auto jac = read_table(w1 / "diff" / "jaccard_summary.txt");
    auto want_jac = read_table(g / "jaccard.tsv");
    double pairs = std::stod(want_jac["pairs"].at(0));
    auto frac = [&](const char* key) { return fmt("%.4f", std::stod(want_jac[key].at(0)) / pairs); };
    c.expect(jac["pairs"].at(0) == want_jac["pairs"].at(0) && jac["perfect"].at(0) == frac("exact_one") &&
                 jac["zero"].at(0) == frac("exact_zero") && jac["at_most_0.25"].at(0) == frac("at_most_quarter"),
             "jaccard summary differs from golden");

    auto stats = read_table(w1 / "sessions" / "stats.txt");
    auto want_stats = read_table(g / "sessions.tsv");
    for (std::size_t i = 0; i < 3; ++i) {
        const char* name = i == 0 ? "train" : i == 1 ? "dev" : "test";
        c.expect(stats["sessions"].at(i) == want_stats[name].at(0) && stats["queries"].at(i) == want_stats[name].at(1),
                 std::string("session counts differ in ") + name);
    }

    auto eval = read_table(w1 / "eval" / "report.tsv");
    auto want_eval = read_table(g / "eval.tsv");
    for (const auto* system : {"bm25", "bm25_url"}) {
        bool same = eval.count(system) && eval[system].size() == want_eval[system].size();
        for (std::size_t i = 0; same && i < 3; ++i) {
            same = std::fabs(std::stod(eval[system][i]) - std::stod(want_eval[system][i])) < 1e-4;
        }
        for (std::size_t i = 3; same && i < 5; ++i) {
            same = eval[system][i] == want_eval[system][i];
        }
        c.expect(same, std::string(system) + " measures differ from golden");
    }
    double map_plain = eval.count("bm25") ? std::stod(eval["bm25"].at(0)) : 0;
    double map_url = eval.count("bm25_url") ? std::stod(eval["bm25_url"].at(0)) : 0;
    c.expect(map_url > map_plain, "URL tokens did not increase MAP");
    c.expect(fs::exists(w1 / "significance" / "report.txt"), "no significance report");

    auto [again, again_out, again_err] = run_into(w1, {"diff"});
    c.expect(again == 0 && again_out.find("up to date") != std::string::npos, "second diff was not a stamped no-op");

    auto [code2, out2, err2] = run_into(w2, {"all"});
    c.expect(code2 == 0, "second run exit " + std::to_string(code2));
    auto a1 = artifact_bytes(w1);
    auto a2 = artifact_bytes(w2);
    std::string differing;
    for (const auto& [name, bytes] : a1) {
        if (!a2.count(name) || a2[name] != bytes) {
            differing += " " + name;
        }
    }
    c.expect(a1.size() == a2.size() && differing.empty(), "artifacts differ between runs:" + differing);
    mock.stop();
    fs::remove_all(w1);
    fs::remove_all(w2);
    c.notes.push_back("MAP " + fmt("%.4f", map_plain) + " -> " + fmt("%.4f", map_url) + " with URL tokens; " +
                      std::to_string(a1.size()) + " artifacts byte-identical across runs");
    return c.outcome();
}

Outcome full_data(const Options& o)
{
    if (!o.full_data) {
        return {true, "needs --full-data, the complete query log, network access and the third-party sessions", true};
    }
    Checks c;
    if (o.full_config.empty() || !fs::exists(o.full_config)) {
        c.expect(false, "--full-config must name the pipeline configuration for the real log");
        return c.outcome();
    }
    auto cli = [&](const std::string& stage) {
        std::ostringstream out, err;
        int code = pipeline::run_cli({"--config", o.full_config.string(), stage}, out, err);
        c.expect(code == 0, stage + " exited " + std::to_string(code) + ": " + err.str());
        return code == 0;
    };
    pipeline::PipelineConfig cfg;
    for (const auto& [k, v] : pipeline::parse_config_text(read_bytes(o.full_config))) {
        cfg.set(k, v);
    }
    cfg.resolve_paths(fs::absolute(o.full_config).parent_path());

    if (cli("ingest")) {
        auto universe = log::read_universe(cfg.work_dir / "universe.tsv");
        c.expect(universe.size() == 1'632'620, "unique URLs " + std::to_string(universe.size()));
        if (cli("map")) {
            auto located = archive::read_mapping(cfg.work_dir / "located.tsv.gz").size();
            double coverage = 100.0 * static_cast<double>(located) / static_cast<double>(universe.size());
            c.expect(std::fabs(coverage - 93.0) <= 2.0, "coverage " + fmt("%.1f%%", coverage));
            c.notes.push_back("coverage " + fmt("%.1f%%", coverage));
        }
    }

    // Third-party sessions, converted to: queries.tsv (qid \t text),
    // candidates.run, qrels.txt and titles.tsv (doc_id \t title \t url).
    if (o.aol17_dir.empty() || !fs::exists(o.aol17_dir / "queries.tsv")) {
        c.expect(false, "--aol17 must name the converted third-party session directory");
        return c.outcome();
    }
    std::vector<std::pair<std::string, rank::TokenSeq>> docs;
    for (const auto& t : extract::read_title_export(o.aol17_dir / "titles.tsv")) {
        docs.emplace_back(t.doc_id, extract::tokenize(t.title));
    }
    auto idx = rank::build_index(std::move(docs));
    std::map<std::string, std::string> text;
    for (const auto& [q, rest] : read_table(o.aol17_dir / "queries.tsv", false)) {
        text[q] = rest.empty() ? "" : rest[0];
    }
    std::map<std::string, std::vector<std::string>> pool;
    for (const auto& e : rank::read_run(o.aol17_dir / "candidates.run")) {
        if (idx.find_doc(e.doc_id) >= 0) {
            pool[e.query_id].push_back(e.doc_id);
        }
    }
    std::vector<rank::RunEntry> run;
    for (const auto& [q, cands] : pool) {
        auto r = rank::rerank(q, extract::tokenize(text[q]), cands, idx);
        run.insert(run.end(), r.begin(), r.end());
    }
    auto m = rank::evaluate(run, rank::read_qrels(o.aol17_dir / "qrels.txt"));
    c.expect(std::fabs(m.map - 0.2457) <= 0.02, "BM25 MAP " + fmt("%.4f", m.map) + " vs 0.2457");
    c.notes.push_back("BM25 MAP " + fmt("%.4f", m.map));
    return c.outcome();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite: one line per criterion."};
    Options o;
    o.fixture = fs::path(SNAPCORPUS_FIXTURE_DIR) / "mini";
    o.data = SNAPCORPUS_DATA_DIR;
    o.scratch = fs::temp_directory_path() / ("snapcorpus_acceptance_" + std::to_string(::getpid()));
    std::vector<std::string> only;
    bool list = false;
    app.add_flag("--full-data", o.full_data, "also run the criteria that need the complete data and network");
    app.add_option("--full-config", o.full_config, "pipeline configuration for the real query log");
    app.add_option("--aol17", o.aol17_dir, "directory with the converted third-party sessions");
    app.add_option("--fixture", o.fixture, "offline fixture directory");
    app.add_option("--only", only, "run only these criteria (repeatable)");
    app.add_flag("--list", list, "list criterion ids");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {"jaccard_golden", "title Jaccard reproduces the 10 golden pairs within 0.05", 1, jaccard_golden},
        {"set_algebra", "set report arithmetic and union identity", 5, set_algebra},
        {"measure_oracle", "MAP/MRR/P@1 equal the definitional oracle under permutation", 10, measure_oracle},
        {"bm25", "BM25 toy corpus values, ranking and monotonicity", 5, bm25},
        {"t_distribution", "Student-t p-values, symmetry and degenerate variance", 5, t_distribution},
        {"sessions", "session invariants on randomized logs", 10, sessions},
        {"fetcher", "fetcher contract against the mock archive", 30, fetcher},
        {"formats", "mapping, run, qrels and session round trips", 30, formats},
        {"end_to_end", "offline fixture pipeline matches golden outputs", 60, end_to_end},
        {"full_data", "full log: URL count, archive coverage, BM25 MAP", 1e9, full_data},
    };
    if (list) {
        for (const auto& cr : criteria) {
            std::cout << cr.id << "\t" << cr.title << "\n";
        }
        return 0;
    }
    for (const auto& id : only) {
        if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& cr) { return cr.id == id; })) {
            std::cerr << "unknown criterion: " << id << "\n";
            return 2;
        }
    }
    fs::create_directories(o.scratch);
    bool all_ok = true;
    for (const auto& cr : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) {
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = cr.run(o);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.skipped && secs > cr.budget_seconds) {
            out.pass = false;
            out.detail += (out.detail.empty() ? "" : "; ") + fmt("runtime %.1fs over budget", secs);
        }
        const char* status = out.skipped ? "SKIP" : out.pass ? "PASS" : "FAIL";
        std::printf("%s  %-15s %s (%s; %.2fs)\n", status, cr.id.c_str(), cr.title.c_str(), out.detail.c_str(), secs);
        std::fflush(stdout);
        all_ok = all_ok && (out.pass || out.skipped);
    }
    fs::remove_all(o.scratch);
    return all_ok ? 0 : 1;
}
