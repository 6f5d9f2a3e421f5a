#include "snapcorpus/langid/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace snapcorpus::langid {

std::size_t out_of_place(const LanguageProfile& doc, const LanguageProfile& lang)
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        auto r = lang.rank(doc.ngrams()[i]);
        if (r == 0) {
            total += lang.size();
        } else {
            auto d = i + 1;
            total += d > r ? d - r : r - d;
        }
    }
    return total;
}

Classification classify(std::string_view text, const std::vector<LanguageProfile>& profiles)
{
    if (profiles.empty() || count_chars(text) < k_min_classify_chars) {
        return {k_undetermined, 0};
    }
    auto counts = count_ngrams(text);
    if (counts.empty()) {
        return {k_undetermined, 0};
    }
    std::vector<std::string> ranked;
    for (std::size_t i = 0; i < counts.size() && i < k_profile_size; ++i) {
        ranked.push_back(counts[i].first);
    }
    LanguageProfile doc("", std::move(ranked));
    const LanguageProfile* best = nullptr;
    std::size_t best_d = 0;
    for (const auto& p : profiles) {
        auto d = out_of_place(doc, p);
        if (!best || d < best_d || (d == best_d && p.lang() < best->lang())) {
            best = &p;
            best_d = d;
        }
    }
    return {best->lang(), best_d};
}

std::vector<LanguageShare> language_report(const std::vector<std::string>& labels,
                                           const std::vector<std::string>& named)
{
    std::set<std::string> known(named.begin(), named.end());
    known.erase(k_undetermined);
    std::map<std::string, std::size_t> counts;
    std::size_t others = 0;
    for (const auto& l : labels) {
        if (known.count(l)) {
            ++counts[l];
        } else {
            ++others;
        }
    }
    std::vector<LanguageShare> rows;
    for (const auto& [lang, n] : counts) {
        rows.push_back({lang, n, 0.0});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
    if (others > 0) {
        rows.push_back({"All Others", others, 0.0});
    }
    if (labels.empty()) {
        return rows;
    }

    // Largest-remainder rounding in tenths of a percent.
    const auto total = static_cast<double>(labels.size());
    std::vector<long> tenths(rows.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    long assigned = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double exact = 1000.0 * static_cast<double>(rows[i].count) / total;
        tenths[i] = static_cast<long>(std::floor(exact));
        assigned += tenths[i];
        remainders.emplace_back(exact - static_cast<double>(tenths[i]), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < 1000 && k < remainders.size(); ++k, ++assigned) {
        ++tenths[remainders[k].second];
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].percent = static_cast<double>(tenths[i]) / 10.0;
    }
    return rows;
}

std::string format_language_report(const std::vector<LanguageShare>& rows)
{
    std::string out = "language\tdocuments\tpercent\n";
    char buf[32];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.1f", r.percent);
        out += r.label + "\t" + std::to_string(r.count) + "\t" + buf + "\n";
    }
    return out;
}

}  // namespace snapcorpus::langid
