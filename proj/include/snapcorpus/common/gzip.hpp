#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace snapcorpus::gzip {

/// Compresses `data` into a single gzip member. The header carries no mtime or
/// file name, so equal inputs always produce equal bytes.
std::string compress(std::string_view data, int level = 6);

/// Inflates every concatenated gzip member in `data`.
std::string decompress(std::string_view data);

bool has_gzip_magic(std::string_view data);

/// Reads a whole file, inflating it when it starts with the gzip magic.
std::string read_file(const std::filesystem::path& path);

/// Streams lines (without the trailing newline) from a plain or gzip file.
/// Returns the number of lines visited.
std::size_t for_each_line(const std::filesystem::path& path,
                          const std::function<void(std::string_view)>& fn);

}  // namespace snapcorpus::gzip
