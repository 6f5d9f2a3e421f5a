#include "snapcorpus/archive/doc_id.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "snapcorpus/common/hash.hpp"

namespace snapcorpus::archive {

std::string assign_doc_id(std::string_view canonical_url)
{
    return md5_hex(canonical_url).substr(0, k_doc_id_width);
}

std::vector<DocIdCollision> audit_doc_ids(const std::vector<std::string>& urls)
{
    std::unordered_map<std::string, std::set<std::string>> by_id;
    by_id.reserve(urls.size());
    for (const auto& u : urls) {
        by_id[assign_doc_id(u)].insert(u);
    }
    std::vector<DocIdCollision> out;
    for (auto& [id, members] : by_id) {
        if (members.size() > 1) {
            out.push_back({id, {members.begin(), members.end()}});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
    return out;
}

double expected_collisions(std::size_t n)
{
    auto nd = static_cast<double>(n);
    return nd * (nd - 1.0) / 2.0 * std::pow(16.0, -static_cast<double>(k_doc_id_width));
}

std::map<std::string, std::string> assign_doc_ids(const std::vector<std::string>& urls)
{
    std::set<std::string> collided;
    for (const auto& c : audit_doc_ids(urls)) {
        collided.insert(c.urls.begin(), c.urls.end());
    }
    std::map<std::string, std::string> out;
    for (const auto& u : urls) {
        out[u] = collided.count(u) ? md5_hex(u) : assign_doc_id(u);
    }
    return out;
}

}  // namespace snapcorpus::archive
