#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace snapcorpus {

/// Splits on every occurrence of `sep`; keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_lower_ascii(std::string_view s);

/// Escapes backslash, tab, newline and carriage return so a value fits in one
/// TSV cell. `unescape_tsv` is the inverse.
std::string escape_tsv(std::string_view s);
std::string unescape_tsv(std::string_view s);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace snapcorpus
