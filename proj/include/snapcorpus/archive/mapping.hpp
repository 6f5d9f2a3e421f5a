#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/archive/types.hpp"

namespace snapcorpus::archive {

/// Serialized mapping: gzip of "doc_id \t original_url \t timestamp \t
/// archive_url" rows sorted by doc_id. Throws DataError listing the URLs when
/// two rows share a doc_id.
std::string encode_mapping(std::vector<ArchiveMapping> rows);
std::vector<ArchiveMapping> decode_mapping(std::string_view bytes);

void write_mapping(const std::vector<ArchiveMapping>& rows, const std::filesystem::path& path);
std::vector<ArchiveMapping> read_mapping(const std::filesystem::path& path);

}  // namespace snapcorpus::archive
