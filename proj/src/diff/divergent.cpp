#include "snapcorpus/diff/divergent.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/hash.hpp"
#include "snapcorpus/common/text.hpp"
#include "snapcorpus/diff/jaccard.hpp"

namespace snapcorpus::diff {

std::vector<TitlePair> join_titles(const std::vector<extract::TitleRow>& a, const std::vector<extract::TitleRow>& b)
{
    std::map<std::string, const extract::TitleRow*> by_id;
    for (const auto& r : b) {
        by_id[r.doc_id] = &r;
    }
    std::vector<TitlePair> out;
    for (const auto& r : a) {
        auto it = by_id.find(r.doc_id);
        if (it != by_id.end()) {
            out.push_back({r.doc_id, r.title, it->second->title});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.doc_id < y.doc_id; });
    out.erase(std::unique(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.doc_id == y.doc_id; }),
              out.end());
    return out;
}

DivergentSample sample_divergent(const std::vector<TitlePair>& pairs, std::size_t k, std::uint64_t seed,
                                 double threshold)
{
    std::vector<std::pair<std::string, ReviewRow>> keyed;
    const std::string salt = std::to_string(seed) + ":";
    for (const auto& p : pairs) {
        auto ta = extract::tokenize(p.title_a);
        auto tb = extract::tokenize(p.title_b);
        auto o = token_overlap(ta, tb);
        if (o.union_size == 0) {
            continue;
        }
        double j = title_jaccard(ta, tb);
        if (j <= threshold) {
            keyed.emplace_back(md5_hex(salt + p.doc_id), ReviewRow{p.doc_id, p.title_a, p.title_b, j});
        }
    }
    DivergentSample s;
    s.population = keyed.size();
    if (k > keyed.size()) {
        throw DataError("requested " + std::to_string(k) + " divergent pairs but only " +
                        std::to_string(keyed.size()) + " qualify");
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end(),
                      [](const auto& x, const auto& y) {
                          return x.first != y.first ? x.first < y.first : x.second.doc_id < y.second.doc_id;
                      });
    for (std::size_t i = 0; i < k; ++i) {
        s.rows.push_back(keyed[i].second);
    }
    std::sort(s.rows.begin(), s.rows.end(), [](const auto& x, const auto& y) { return x.doc_id < y.doc_id; });
    return s;
}

std::string format_review_sheet(const DivergentSample& s)
{
    std::string out = "# population\t" + std::to_string(s.population) + "\ndoc_id\ttitle_a\ttitle_b\tjaccard\n";
    char buf[32];
    for (const auto& r : s.rows) {
        std::snprintf(buf, sizeof buf, "%.4f", r.jaccard);
        out += r.doc_id + "\t" + escape_tsv(r.title_a) + "\t" + escape_tsv(r.title_b) + "\t" + buf + "\n";
    }
    return out;
}

}  // namespace snapcorpus::diff
