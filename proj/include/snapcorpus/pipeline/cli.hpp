#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace snapcorpus::pipeline {

inline constexpr int k_exit_ok = 0;
inline constexpr int k_exit_usage = 1;
inline constexpr int k_exit_data = 2;
inline constexpr int k_exit_network = 3;

/// Environment variable overriding the availability endpoint.
inline constexpr const char* k_endpoint_env = "SNAPCORPUS_ARCHIVE_ENDPOINT";

/// The `snapcorpus` command line. `args` excludes the program name. Returns
/// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snapcorpus::pipeline
