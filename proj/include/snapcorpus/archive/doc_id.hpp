#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace snapcorpus::archive {

inline constexpr std::size_t k_doc_id_width = 12;

/// First 12 lowercase hex digits of MD5(url).
std::string assign_doc_id(std::string_view canonical_url);

struct DocIdCollision {
    std::string doc_id;
    std::vector<std::string> urls;  // sorted
};

/// Exhaustive audit: every short id shared by more than one URL.
std::vector<DocIdCollision> audit_doc_ids(const std::vector<std::string>& urls);

/// Expected number of colliding pairs among n random 48-bit ids.
double expected_collisions(std::size_t n);

/// Ids for a URL set; members of a colliding group get the full 32-digit
/// digest instead of the short prefix.
std::map<std::string, std::string> assign_doc_ids(const std::vector<std::string>& urls);

}  // namespace snapcorpus::archive
