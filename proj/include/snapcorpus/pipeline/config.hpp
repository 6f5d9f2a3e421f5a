#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/archive/types.hpp"
#include "snapcorpus/common/timestamp.hpp"
#include "snapcorpus/rank/bm25.hpp"
#include "snapcorpus/session/split.hpp"

namespace snapcorpus::pipeline {

/// A configuration value that cannot be used (unknown key, bad number).
/// Reported as a usage error.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    // Inputs supplied by the user.
    std::filesystem::path log_dir = "logs";
    std::filesystem::path old_titles;  // optional, needed by `diff`
    std::filesystem::path langid_profiles;
    std::filesystem::path session_baseline;  // optional sessions file for deltas

    // Stage outputs.
    std::filesystem::path work_dir = "work";
    std::filesystem::path mapping_file;
    std::filesystem::path doc_store;
    std::filesystem::path session_dir;
    std::filesystem::path run_dir;

    std::string archive_endpoint{archive::k_default_endpoint};
    archive::FetchPolicy fetch;
    std::size_t max_body_tokens = 2'000'000;

    EpochSeconds gap_threshold = 30 * 60;
    std::size_t min_queries = 2;
    session::SplitSpec splits;
    session::Split eval_split = session::Split::test;

    rank::Bm25Params bm25;
    std::size_t candidate_depth = 50;
    bool include_url = false;

    std::size_t divergent_sample = 100;
    double divergent_threshold = 0.0;
    double alpha = 0.05;

    std::uint64_t seed = 0;
    unsigned jobs = 4;

    PipelineConfig();

    /// Sets one key from its text form. Throws ConfigError.
    void set(std::string_view key, std::string_view value);
    /// Every key with its current value, in key order.
    std::map<std::string, std::string> values() const;
    /// Resolves relative paths against `base` and fills derived defaults.
    void resolve_paths(const std::filesystem::path& base);
    /// MD5 over every parameter that can change an artifact. Paths and `jobs`
    /// are excluded.
    std::string hash() const;
    /// Throws ConfigError when values are out of range.
    void validate() const;
};

/// Flat "key = value" lines; '#' starts a comment line. Later lines win.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// All recognised keys with a one-line description, for `--help` output.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace snapcorpus::pipeline
