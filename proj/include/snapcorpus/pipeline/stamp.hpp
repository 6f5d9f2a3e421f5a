#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace snapcorpus::pipeline {

/// MD5 over the contents of files and directory trees. Names enter the hash
/// relative to each root, so equal trees in different places hash equally.
std::string hash_inputs(const std::vector<std::filesystem::path>& roots);

/// Sidecar recording how a stage's outputs were made:
///   version <v>
///   config <md5>
///   inputs <md5>
///   output <file name> <md5>
struct Stamp {
    std::string version;
    std::string config_hash;
    std::string input_hash;
    std::vector<std::pair<std::string, std::string>> outputs;  // name, md5

    bool operator==(const Stamp&) const = default;
};

std::string format_stamp(const Stamp& s);
/// nullopt-like empty stamp (no version) when the file is absent or damaged.
Stamp read_stamp(const std::filesystem::path& path);

/// A stamp for `outputs` as they exist now.
Stamp make_stamp(const std::string& version, const std::string& config_hash, const std::string& input_hash,
                 const std::vector<std::filesystem::path>& outputs);

/// True when the stamp matches and every output still has its recorded hash.
bool stamp_current(const std::filesystem::path& stamp_path, const std::string& version,
                   const std::string& config_hash, const std::string& input_hash,
                   const std::vector<std::filesystem::path>& outputs);

}  // namespace snapcorpus::pipeline
