#include "snapcorpus/pipeline/config.hpp"

#include <charconv>
#include <cstdio>
#include <set>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"

#ifndef SNAPCORPUS_DATA_DIR
#define SNAPCORPUS_DATA_DIR "data"
#endif

namespace snapcorpus::pipeline {

namespace fs = std::filesystem;

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view v)
{
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("config key " + std::string(key) + ": not a number: " + std::string(v));
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v)
{
    auto s = to_lower_ascii(v);
    if (s == "true" || s == "yes" || s == "1") {
        return true;
    }
    if (s == "false" || s == "no" || s == "0") {
        return false;
    }
    throw ConfigError("config key " + std::string(key) + ": expected true or false, got " + std::string(v));
}

session::DateRange parse_range(std::string_view key, std::string_view v)
{
    try {
        return session::parse_date_range(v);
    } catch (const DataError& e) {
        throw ConfigError("config key " + std::string(key) + ": " + e.what());
    }
}

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PipelineConfig::PipelineConfig()
{
    langid_profiles = fs::path(SNAPCORPUS_DATA_DIR) / "langid" / "profiles";
    splits.train = session::parse_date_range("2006-03-01/2006-05-01");
    splits.dev = session::parse_date_range("2006-05-01/2006-05-16");
    splits.test = session::parse_date_range("2006-05-16/2006-06-01");
}

const std::vector<std::pair<std::string, std::string>>& config_keys()
{
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"log_dir", "query log file or directory of log files (plain or gzip)"},
        {"old_titles", "title export of the older corpus (doc_id, title, url), used by diff"},
        {"langid_profiles", "directory of language n-gram profiles"},
        {"session_baseline", "sessions file of a reference dataset, for percentage deltas"},
        {"work_dir", "directory for intermediate artifacts, journals and stamps"},
        {"mapping_file", "distributable doc_id to capture mapping (default work_dir/mapping.tsv.gz)"},
        {"doc_store", "extracted document store (default work_dir/docs.store)"},
        {"session_dir", "session dataset directory (default work_dir/sessions)"},
        {"run_dir", "candidate, qrels and run files (default work_dir/runs)"},
        {"archive_endpoint", "availability API endpoint"},
        {"target_timestamp", "capture date to ask for, YYYYMMDDhhmmss"},
        {"max_concurrency", "parallel archive requests (capped by --jobs)"},
        {"min_request_interval_ms", "minimum spacing between requests to one host"},
        {"max_retries", "retries after a transient failure"},
        {"backoff_base_ms", "first backoff delay; doubles per retry"},
        {"request_timeout_ms", "timeout of a single request"},
        {"per_url_budget_ms", "wall-clock cap on all attempts for one URL"},
        {"max_body_tokens", "body text is truncated after this many tokens"},
        {"gap_threshold", "inactivity gap in seconds that starts a new session"},
        {"min_queries", "sessions with fewer distinct queries are dropped"},
        {"split_train", "train date range, YYYY-MM-DD/YYYY-MM-DD, end exclusive"},
        {"split_dev", "dev date range"},
        {"split_test", "test date range"},
        {"eval_split", "split whose queries are re-ranked and evaluated"},
        {"bm25_k1", "BM25 term frequency saturation"},
        {"bm25_b", "BM25 length normalisation"},
        {"candidate_depth", "first-stage candidates per query"},
        {"include_url", "append URL tokens to the document text when re-ranking"},
        {"divergent_sample", "size of the low-overlap title review sample"},
        {"divergent_threshold", "largest Jaccard value eligible for the review sample"},
        {"alpha", "significance level after Bonferroni correction"},
        {"seed", "seed for sampling and backoff jitter"},
        {"jobs", "cap on internal parallelism"},
    };
    return keys;
}

void PipelineConfig::set(std::string_view key, std::string_view value)
{
    auto v = std::string(trim(value));
    if (key == "log_dir") {
        log_dir = v;
    } else if (key == "old_titles") {
        old_titles = v;
    } else if (key == "langid_profiles") {
        langid_profiles = v;
    } else if (key == "session_baseline") {
        session_baseline = v;
    } else if (key == "work_dir") {
        work_dir = v;
    } else if (key == "mapping_file") {
        mapping_file = v;
    } else if (key == "doc_store") {
        doc_store = v;
    } else if (key == "session_dir") {
        session_dir = v;
    } else if (key == "run_dir") {
        run_dir = v;
    } else if (key == "archive_endpoint") {
        archive_endpoint = v;
    } else if (key == "target_timestamp") {
        fetch.target_timestamp = v;
    } else if (key == "max_concurrency") {
        fetch.max_concurrency = parse_number<unsigned>(key, v);
    } else if (key == "min_request_interval_ms") {
        fetch.min_request_interval_per_host = std::chrono::milliseconds(parse_number<long>(key, v));
    } else if (key == "max_retries") {
        fetch.max_retries = parse_number<unsigned>(key, v);
    } else if (key == "backoff_base_ms") {
        fetch.backoff_base = std::chrono::milliseconds(parse_number<long>(key, v));
    } else if (key == "request_timeout_ms") {
        fetch.request_timeout = std::chrono::milliseconds(parse_number<long>(key, v));
    } else if (key == "per_url_budget_ms") {
        fetch.per_url_budget = std::chrono::milliseconds(parse_number<long>(key, v));
    } else if (key == "max_body_tokens") {
        max_body_tokens = parse_number<std::size_t>(key, v);
    } else if (key == "gap_threshold") {
        gap_threshold = parse_number<EpochSeconds>(key, v);
    } else if (key == "min_queries") {
        min_queries = parse_number<std::size_t>(key, v);
    } else if (key == "split_train") {
        splits.train = parse_range(key, v);
    } else if (key == "split_dev") {
        splits.dev = parse_range(key, v);
    } else if (key == "split_test") {
        splits.test = parse_range(key, v);
    } else if (key == "eval_split") {
        auto s = session::Split::none;
        try {
            s = session::parse_split(v);
        } catch (const DataError&) {
        }
        if (s == session::Split::none) {
            throw ConfigError("config key eval_split: expected train, dev or test, got " + v);
        }
        eval_split = s;
    } else if (key == "bm25_k1") {
        bm25.k1 = parse_number<double>(key, v);
    } else if (key == "bm25_b") {
        bm25.b = parse_number<double>(key, v);
    } else if (key == "candidate_depth") {
        candidate_depth = parse_number<std::size_t>(key, v);
    } else if (key == "include_url") {
        include_url = parse_bool(key, v);
    } else if (key == "divergent_sample") {
        divergent_sample = parse_number<std::size_t>(key, v);
    } else if (key == "divergent_threshold") {
        divergent_threshold = parse_number<double>(key, v);
    } else if (key == "alpha") {
        alpha = parse_number<double>(key, v);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, v);
        fetch.seed = seed;
    } else if (key == "jobs") {
        jobs = parse_number<unsigned>(key, v);
    } else {
        throw ConfigError("unknown config key: " + std::string(key));
    }
}

std::map<std::string, std::string> PipelineConfig::values() const
{
    return {
        {"log_dir", log_dir.string()},
        {"old_titles", old_titles.string()},
        {"langid_profiles", langid_profiles.string()},
        {"session_baseline", session_baseline.string()},
        {"work_dir", work_dir.string()},
        {"mapping_file", mapping_file.string()},
        {"doc_store", doc_store.string()},
        {"session_dir", session_dir.string()},
        {"run_dir", run_dir.string()},
        {"archive_endpoint", archive_endpoint},
        {"target_timestamp", fetch.target_timestamp},
        {"max_concurrency", std::to_string(fetch.max_concurrency)},
        {"min_request_interval_ms", std::to_string(fetch.min_request_interval_per_host.count())},
        {"max_retries", std::to_string(fetch.max_retries)},
        {"backoff_base_ms", std::to_string(fetch.backoff_base.count())},
        {"request_timeout_ms", std::to_string(fetch.request_timeout.count())},
        {"per_url_budget_ms", std::to_string(fetch.per_url_budget.count())},
        {"max_body_tokens", std::to_string(max_body_tokens)},
        {"gap_threshold", std::to_string(gap_threshold)},
        {"min_queries", std::to_string(min_queries)},
        {"split_train", session::format_date_range(splits.train)},
        {"split_dev", session::format_date_range(splits.dev)},
        {"split_test", session::format_date_range(splits.test)},
        {"eval_split", session::to_string(eval_split)},
        {"bm25_k1", number(bm25.k1)},
        {"bm25_b", number(bm25.b)},
        {"candidate_depth", std::to_string(candidate_depth)},
        {"include_url", include_url ? "true" : "false"},
        {"divergent_sample", std::to_string(divergent_sample)},
        {"divergent_threshold", number(divergent_threshold)},
        {"alpha", number(alpha)},
        {"seed", std::to_string(seed)},
        {"jobs", std::to_string(jobs)},
    };
}

void PipelineConfig::resolve_paths(const fs::path& base)
{
    auto fix = [&](fs::path& p) {
        if (!p.empty() && p.is_relative()) {
            p = (base / p).lexically_normal();
        }
    };
    for (auto* p : {&log_dir, &old_titles, &langid_profiles, &session_baseline, &work_dir}) {
        fix(*p);
    }
    auto derive = [&](fs::path& p, const char* name) {
        if (p.empty()) {
            p = work_dir / name;
        } else {
            fix(p);
        }
    };
    derive(mapping_file, "mapping.tsv.gz");
    derive(doc_store, "docs.store");
    derive(session_dir, "sessions");
    derive(run_dir, "runs");
}

std::string PipelineConfig::hash() const
{
    // Paths are left out: inputs enter stamps through their content hashes.
    static const std::set<std::string> skip = {
        "jobs",     "log_dir",      "old_titles", "langid_profiles", "session_baseline",
        "work_dir", "mapping_file", "doc_store",  "session_dir",     "run_dir",
    };
    std::string text;
    for (const auto& [k, v] : values()) {
        if (!skip.count(k)) {
            text += k + "=" + v + "\n";
        }
    }
    return md5_hex(text);
}

void PipelineConfig::validate() const
{
    try {
        fetch.validate();
        bm25.validate();
        splits.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (gap_threshold <= 0) {
        throw ConfigError("gap_threshold must be positive");
    }
    if (candidate_depth == 0) {
        throw ConfigError("candidate_depth must be at least 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    if (!(divergent_threshold >= 0.0 && divergent_threshold <= 1.0)) {
        throw ConfigError("divergent_threshold must lie in [0, 1]");
    }
    if (jobs == 0) {
        throw ConfigError("jobs must be at least 1");
    }
    if (!parse_ts14(fetch.target_timestamp)) {
        throw ConfigError("target_timestamp must be YYYYMMDDhhmmss");
    }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

}  // namespace snapcorpus::pipeline
