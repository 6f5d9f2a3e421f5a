#include "snapcorpus/pipeline/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/gzip.hpp"
#include "snapcorpus/pipeline/config.hpp"
#include "snapcorpus/pipeline/stages.hpp"

#ifndef SNAPCORPUS_VERSION
#define SNAPCORPUS_VERSION "dev"
#endif

namespace snapcorpus::pipeline {

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config;
    std::optional<unsigned> jobs;
    std::optional<std::uint64_t> seed;
    bool include_url = false;
    bool dry_run = false;
    std::string mock_endpoint;
    std::vector<std::string> overrides;
};

std::string keys_help()
{
    std::string out = "Configuration keys (file lines \"key = value\", or --set key=value):\n";
    for (const auto& [k, d] : config_keys()) {
        out += "  " + k + std::string(k.size() < 24 ? 24 - k.size() : 1, ' ') + d + "\n";
    }
    out += "Environment: " + std::string(k_endpoint_env) + " overrides archive_endpoint.\n";
    out += "Exit codes: 0 ok, 1 usage error, 2 data error, 3 archive retries exhausted.\n";
    return out;
}

PipelineConfig load_config(const Flags& f)
{
    PipelineConfig cfg;
    fs::path base = fs::current_path();
    if (!f.config.empty()) {
        if (!fs::exists(f.config)) {
            throw ConfigError("config file not found: " + f.config);
        }
        for (const auto& [k, v] : parse_config_text(gzip::read_file(f.config))) {
            cfg.set(k, v);
        }
        base = fs::absolute(f.config).parent_path();
    }
    if (const char* env = std::getenv(k_endpoint_env); env && *env) {
        cfg.set("archive_endpoint", env);
    }
    for (const auto& o : f.overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got " + o);
        }
        cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (f.jobs) {
        cfg.set("jobs", std::to_string(*f.jobs));
    }
    if (f.seed) {
        cfg.set("seed", std::to_string(*f.seed));
    }
    if (f.include_url) {
        cfg.include_url = true;
    }
    if (!f.mock_endpoint.empty()) {
        auto url = f.mock_endpoint;
        while (!url.empty() && url.back() == '/') {
            url.pop_back();
        }
        cfg.archive_endpoint = url + "/wayback/available";
    }
    // Flag-relative paths (from --set) resolve against the working directory
    // only when no config file is given; otherwise against the config file.
    cfg.resolve_paths(base);
    cfg.validate();
    return cfg;
}

int execute(const std::string& command, const PipelineConfig& cfg, bool dry_run, std::ostream& out)
{
    std::vector<std::pair<std::string, PipelineConfig>> steps;
    if (command == "all") {
        auto with_url = cfg;
        with_url.include_url = true;
        for (const auto& s : stage_names()) {
            if (s == "rerank") {
                auto plain = cfg;
                plain.include_url = false;
                steps.emplace_back(s, plain);
                steps.emplace_back(s, with_url);
            } else {
                steps.emplace_back(s, cfg);
            }
        }
    } else {
        steps.emplace_back(command, cfg);
    }
    if (dry_run) {
        out << "snapcorpus " << SNAPCORPUS_VERSION << " config " << cfg.hash() << "\n";
        for (const auto& [k, v] : cfg.values()) {
            out << "  " << k << " = " << v << "\n";
        }
        for (const auto& [stage, c] : steps) {
            out << describe_plan(plan_stage(stage, c), c, SNAPCORPUS_VERSION);
        }
        return k_exit_ok;
    }
    for (const auto& [stage, c] : steps) {
        run_stage(stage, c, SNAPCORPUS_VERSION, out);
    }
    return k_exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Rebuild a web corpus from a query log via web archive snapshots, then build and evaluate "
                 "session-based ranking datasets.",
                 "snapcorpus"};
    app.footer(keys_help());
    app.set_version_flag("--version", SNAPCORPUS_VERSION);
    Flags f;
    app.add_option("--config", f.config, "key=value configuration file");
    app.add_option("--jobs", f.jobs, "cap on internal parallelism")->check(CLI::PositiveNumber);
    app.add_option("--seed", f.seed, "seed for sampling and backoff jitter");
    app.add_flag("--include-url", f.include_url, "append URL tokens to document text when re-ranking");
    app.add_flag("--dry-run", f.dry_run, "print the effective configuration and the plan, run nothing");
    app.add_option("--mock-endpoint", f.mock_endpoint, "base URL of a mock archive (replaces archive_endpoint)");
    app.add_option("--set", f.overrides, "override one configuration key, key=value (repeatable)");
    app.require_subcommand(1, 1);
    app.fallthrough();

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"ingest", "parse query logs and build the clicked-URL universe"},
        {"map", "look up the closest archive capture of every URL"},
        {"fetch", "download located captures and write the mapping file"},
        {"extract", "extract titles and body text into the document store"},
        {"langid", "classify document languages"},
        {"diff", "compare the corpus with an older corpus version"},
        {"sessions", "segment the log into sessions and split by date"},
        {"index", "build title and title+URL inverted indexes"},
        {"rerank", "build candidates and qrels, then re-rank with BM25"},
        {"eval", "evaluate every run file against the qrels"},
        {"significance", "paired t-tests with Bonferroni correction between runs"},
        {"all", "every stage in order, re-ranking with and without URL tokens"},
    };
    for (const auto& [name, desc] : commands) {
        app.add_subcommand(name, desc);
    }

    std::vector<std::string> argv_store = {"snapcorpus"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? k_exit_ok : k_exit_usage;
    }
    auto command = app.get_subcommands().front()->get_name();

    try {
        auto cfg = load_config(f);
        return execute(command, cfg, f.dry_run, out);
    } catch (const ConfigError& e) {
        err << "snapcorpus: " << e.what() << "\n";
        return k_exit_usage;
    } catch (const NetworkError& e) {
        err << "snapcorpus " << command << ": " << e.what() << "\n";
        return k_exit_network;
    } catch (const std::exception& e) {
        err << "snapcorpus " << command << ": " << e.what() << "\n";
        return k_exit_data;
    }
}

}  // namespace snapcorpus::pipeline
