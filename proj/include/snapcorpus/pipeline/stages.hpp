#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "snapcorpus/pipeline/config.hpp"

namespace snapcorpus::pipeline {

/// An input of a stage; `producer` names the subcommand that makes it, or is
/// empty for files the user supplies.
struct Artifact {
    std::filesystem::path path;
    std::string producer;
};

struct StagePlan {
    std::string stage;
    std::string stamp_name;
    std::vector<Artifact> inputs;
    std::vector<std::filesystem::path> outputs;
    std::filesystem::path stamp_path;
};

/// Subcommand names in pipeline order.
const std::vector<std::string>& stage_names();

/// The inputs and outputs of `stage` under `cfg`. Throws ConfigError for an
/// unknown stage.
StagePlan plan_stage(const std::string& stage, const PipelineConfig& cfg);

/// Human-readable plan: inputs with their state, outputs, and whether the
/// stage would run or is already current.
std::string describe_plan(const StagePlan& plan, const PipelineConfig& cfg, const std::string& version);

enum class StageStatus { ran, up_to_date };

/// Runs one stage unless its stamp shows the outputs are current. A missing
/// input throws DataError naming the path and the subcommand that makes it.
/// Progress and summaries go to `log`.
StageStatus run_stage(const std::string& stage, const PipelineConfig& cfg, const std::string& version,
                      std::ostream& log);

/// Run file name (without extension) of the BM25 variant selected by `cfg`.
std::string bm25_run_name(const PipelineConfig& cfg);

}  // namespace snapcorpus::pipeline
