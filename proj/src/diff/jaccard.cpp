#include "snapcorpus/diff/jaccard.hpp"

#include <algorithm>
#include <cstdio>

namespace snapcorpus::diff {

Overlap token_overlap(const TokenSeq& a, const TokenSeq& b)
{
    TokenSeq sa = a;
    TokenSeq sb = b;
    std::sort(sa.begin(), sa.end());
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    std::sort(sb.begin(), sb.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    TokenSeq common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    return {common.size(), sa.size() + sb.size() - common.size()};
}

double title_jaccard(const TokenSeq& a, const TokenSeq& b)
{
    auto o = token_overlap(a, b);
    if (o.union_size == 0) {
        return 1.0;
    }
    return static_cast<double>(o.intersection) / static_cast<double>(o.union_size);
}

double title_jaccard(const std::string& a, const std::string& b)
{
    return title_jaccard(extract::tokenize(a), extract::tokenize(b));
}

std::size_t bucket_of(const Overlap& o)
{
    if (o.intersection == 0) {
        return 0;
    }
    // ceil(20 * i / u) - 1 without floating point.
    std::size_t b = (k_buckets * o.intersection + o.union_size - 1) / o.union_size;
    return std::min(b - 1, k_buckets - 1);
}

void JaccardHistogram::add(const TokenSeq& a, const TokenSeq& b)
{
    auto o = token_overlap(a, b);
    if (o.union_size == 0) {
        ++both_empty;
        return;
    }
    ++pairs;
    ++bins[bucket_of(o)];
    if (o.intersection == 0) {
        ++exact_zero;
    }
    if (o.intersection == o.union_size) {
        ++exact_one;
    }
    if (4 * o.intersection <= o.union_size) {
        ++at_most_quarter;
    }
}

void JaccardHistogram::merge(const JaccardHistogram& o)
{
    for (std::size_t i = 0; i < k_buckets; ++i) {
        bins[i] += o.bins[i];
    }
    pairs += o.pairs;
    exact_zero += o.exact_zero;
    exact_one += o.exact_one;
    at_most_quarter += o.at_most_quarter;
    both_empty += o.both_empty;
}

namespace {

double ratio(std::uint64_t n, std::uint64_t d) { return d == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(d); }

}  // namespace

double JaccardHistogram::perfect_fraction() const { return ratio(exact_one, pairs); }
double JaccardHistogram::le_025_fraction() const { return ratio(at_most_quarter, pairs); }
double JaccardHistogram::zero_fraction() const { return ratio(exact_zero, pairs); }

JaccardHistogram jaccard_histogram(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs)
{
    JaccardHistogram h;
    for (const auto& [a, b] : pairs) {
        h.add(a, b);
    }
    return h;
}

std::string format_histogram_tsv(const JaccardHistogram& h)
{
    std::string out = "bucket_low\tbucket_high\tcount\n";
    char buf[64];
    for (std::size_t i = 0; i < k_buckets; ++i) {
        std::snprintf(buf, sizeof buf, "%.2f\t%.2f\t%llu\n", static_cast<double>(i) / k_buckets,
                      static_cast<double>(i + 1) / k_buckets, static_cast<unsigned long long>(h.bins[i]));
        out += buf;
    }
    return out;
}

std::string format_histogram_summary(const JaccardHistogram& h)
{
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "# pairs compared over the intersection of both corpora\n"
                  "pairs\t%llu\nboth_empty_excluded\t%llu\nperfect\t%.4f\nat_most_0.25\t%.4f\nzero\t%.4f\n",
                  static_cast<unsigned long long>(h.pairs), static_cast<unsigned long long>(h.both_empty),
                  h.perfect_fraction(), h.le_025_fraction(), h.zero_fraction());
    return buf;
}

}  // namespace snapcorpus::diff
