#include "snapcorpus/extract/corpus_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace snapcorpus::extract {

double quantile(const std::vector<std::size_t>& sorted, double q)
{
    if (sorted.empty()) {
        return 0.0;
    }
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return static_cast<double>(sorted[lo]) * (1.0 - frac) + static_cast<double>(sorted[hi]) * frac;
}

LengthSummary summarize_lengths(std::vector<std::size_t> lengths)
{
    std::sort(lengths.begin(), lengths.end());
    LengthSummary s;
    s.count = lengths.size();
    if (lengths.empty()) {
        return s;
    }
    s.q1 = quantile(lengths, 0.25);
    s.median = quantile(lengths, 0.5);
    s.q3 = quantile(lengths, 0.75);
    s.max = lengths.back();
    return s;
}

CorpusStats corpus_stats(const DocStoreReader& store)
{
    std::vector<std::size_t> titles;
    std::vector<std::size_t> bodies;
    store.scan([&](const DocumentRecord& d) {
        titles.push_back(count_tokens(d.title));
        bodies.push_back(count_tokens(d.body));
    });
    CorpusStats s;
    s.documents = titles.size();
    s.title_tokens = summarize_lengths(std::move(titles));
    s.body_tokens = summarize_lengths(std::move(bodies));
    return s;
}

std::string format_corpus_stats(const CorpusStats& s)
{
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "documents\t%zu\nexcluded\t%zu\nexcluded_fraction\t%.4f\ntruncated\t%zu\n"
                  "title_tokens_median\t%.1f\ntitle_tokens_q1\t%.1f\ntitle_tokens_q3\t%.1f\ntitle_tokens_max\t%zu\n"
                  "body_tokens_median\t%.1f\nbody_tokens_q1\t%.1f\nbody_tokens_q3\t%.1f\nbody_tokens_max\t%zu\n"
                  "store_bytes\t%ju\n",
                  s.documents, s.excluded, s.excluded_fraction(), s.truncated, s.title_tokens.median,
                  s.title_tokens.q1, s.title_tokens.q3, s.title_tokens.max, s.body_tokens.median,
                  s.body_tokens.q1, s.body_tokens.q3, s.body_tokens.max, s.store_bytes);
    return buf;
}

}  // namespace snapcorpus::extract
