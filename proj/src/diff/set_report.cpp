#include "snapcorpus/diff/set_report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "snapcorpus/common/error.hpp"

namespace snapcorpus::diff {

CorpusKeySet::CorpusKeySet(std::string name_, std::vector<std::string> keys_)
    : name(std::move(name_)), keys(std::move(keys_))
{
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

double SetReport::percent(std::size_t n) const
{
    return universe == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(universe);
}

SetReport set_report_from_counts(std::size_t a, std::size_t b, std::size_t intersection, std::size_t universe_size)
{
    if (intersection > a || intersection > b) {
        throw DataError("intersection larger than one of the sets");
    }
    SetReport r;
    r.universe = universe_size;
    r.a = a;
    r.b = b;
    r.intersection = intersection;
    r.a_minus_b = a - intersection;
    r.b_minus_a = b - intersection;
    r.union_size = a + b - intersection;
    if (universe_size < r.union_size) {
        throw DataError("universe size " + std::to_string(universe_size) + " is smaller than the union " +
                        std::to_string(r.union_size));
    }
    return r;
}

SetReport set_report(const CorpusKeySet& a, const CorpusKeySet& b, std::size_t universe_size)
{
    std::size_t inter = 0;
    std::size_t uni = 0;
    auto i = a.keys.begin();
    auto j = b.keys.begin();
    while (i != a.keys.end() || j != b.keys.end()) {
        ++uni;
        if (j == b.keys.end() || (i != a.keys.end() && *i < *j)) {
            ++i;
        } else if (i == a.keys.end() || *j < *i) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    auto r = set_report_from_counts(a.keys.size(), b.keys.size(), inter, universe_size);
    if (r.union_size != uni) {
        throw std::logic_error("union identity violated");
    }
    r.name_a = a.name;
    r.name_b = b.name;
    return r;
}

namespace {

std::vector<std::pair<std::string, std::size_t>> report_rows(const SetReport& r)
{
    const std::string& a = r.name_a.empty() ? "A" : r.name_a;
    const std::string& b = r.name_b.empty() ? "B" : r.name_b;
    return {
        {a, r.a},
        {b, r.b},
        {a + " \\ " + b, r.a_minus_b},
        {b + " \\ " + a, r.b_minus_a},
        {a + " ∪ " + b, r.union_size},
        {a + " ∩ " + b, r.intersection},
    };
}

}  // namespace

std::string format_set_report_tsv(const SetReport& r)
{
    std::string out = "# universe\t" + std::to_string(r.universe) + "\nset\tcount\tpercent\n";
    char buf[32];
    for (const auto& [label, n] : report_rows(r)) {
        std::snprintf(buf, sizeof buf, "%.1f", r.percent(n));
        out += label + "\t" + std::to_string(n) + "\t" + buf + "\n";
    }
    return out;
}

std::string format_set_report_table(const SetReport& r)
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "URLs in universe: %zu\n", r.universe);
    out += buf;
    for (const auto& [label, n] : report_rows(r)) {
        std::snprintf(buf, sizeof buf, "  %-24s %12zu  %5.1f%%\n", label.c_str(), n, r.percent(n));
        out += buf;
    }
    return out;
}

}  // namespace snapcorpus::diff
