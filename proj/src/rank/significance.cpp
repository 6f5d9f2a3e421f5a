#include "snapcorpus/rank/significance.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/rank/measures.hpp"

namespace snapcorpus::rank {

double student_t_two_sided_p(double t, double df)
{
    if (std::isinf(t)) {
        return 0.0;
    }
    double x = df / (df + t * t);
    return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTest paired_ttest(const std::map<std::string, double>& a, const std::map<std::string, double>& b)
{
    if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
            return x.first == y.first;
        })) {
        throw DataError("paired t-test needs identical query sets");
    }
    if (a.size() < 2) {
        throw DataError("paired t-test needs at least 2 queries");
    }
    std::vector<double> diff;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        diff.push_back(ia->second - ib->second);
    }
    auto n = static_cast<double>(diff.size());
    double mean = pairwise_sum(diff.data(), diff.size()) / n;
    std::vector<double> sq;
    for (double d : diff) {
        sq.push_back((d - mean) * (d - mean));
    }
    double var = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);

    TTest r;
    r.n = diff.size();
    // Differences that are equal up to rounding count as zero variance.
    double scale = std::max(1.0, std::fabs(mean));
    if (var <= 1e-24 * scale * scale) {
        r.t = 0.0;
        r.p = mean == 0.0 ? 1.0 : 0.0;
        if (mean != 0.0) {
            r.t = mean > 0 ? INFINITY : -INFINITY;
        }
        return r;
    }
    r.t = mean / std::sqrt(var / n);
    r.p = student_t_two_sided_p(r.t, n - 1.0);
    return r;
}

std::string system_letter(std::size_t i)
{
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i = i / 26;
    } while (i-- > 0);
    return s;
}

std::string SignificanceMatrix::nonsignificant_letters(std::size_t i) const
{
    std::string out;
    for (const auto& p : pairs) {
        if (!p.significant && (p.i == i || p.j == i)) {
            out += system_letter(p.i == i ? p.j : p.i);
        }
    }
    return out;
}

SignificanceMatrix significance_matrix(const std::vector<NamedScores>& systems, double alpha)
{
    if (systems.size() < 2) {
        throw DataError("significance matrix needs at least 2 systems");
    }
    SignificanceMatrix m;
    m.alpha = alpha;
    const double family = static_cast<double>(systems.size() * (systems.size() - 1) / 2);
    for (const auto& s : systems) {
        m.systems.push_back(s.name);
        std::vector<double> v;
        for (const auto& [q, x] : s.per_query) {
            v.push_back(x);
        }
        m.means.push_back(v.empty() ? 0.0 : pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()));
    }
    for (std::size_t i = 0; i < systems.size(); ++i) {
        for (std::size_t j = i + 1; j < systems.size(); ++j) {
            PairTest p;
            p.i = i;
            p.j = j;
            try {
                p.test = paired_ttest(systems[i].per_query, systems[j].per_query);
            } catch (const DataError& e) {
                throw DataError(systems[i].name + " vs " + systems[j].name + ": " + e.what());
            }
            p.adjusted_p = std::min(1.0, p.test.p * family);
            p.significant = p.adjusted_p < alpha;
            m.pairs.push_back(p);
        }
    }
    return m;
}

std::string format_significance_tsv(const SignificanceMatrix& m)
{
    std::string out = "system_a\tsystem_b\tt\tp\tp_adjusted\tsignificant\n";
    char buf[128];
    for (const auto& p : m.pairs) {
        std::snprintf(buf, sizeof buf, "\t%.6g\t%.6g\t%.6g\t%s\n", p.test.t, p.test.p, p.adjusted_p,
                      p.significant ? "yes" : "no");
        out += m.systems[p.i] + "\t" + m.systems[p.j] + buf;
    }
    return out;
}

std::string format_significance_table(const SignificanceMatrix& m, const std::string& measure)
{
    std::size_t width = 6;
    for (const auto& s : m.systems) {
        width = std::max(width, s.size());
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "    %-*s  %s\n", static_cast<int>(width), "system", measure.c_str());
    std::string out = buf;
    for (std::size_t i = 0; i < m.systems.size(); ++i) {
        auto letters = m.nonsignificant_letters(i);
        std::snprintf(buf, sizeof buf, "(%s) %-*s  %.4f%s%s\n", system_letter(i).c_str(), static_cast<int>(width),
                      m.systems[i].c_str(), m.means[i], letters.empty() ? "" : "^", letters.c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "# ^x: not significantly different from system x (paired t-test, p<%g, "
                                   "Bonferroni over %zu pairs)\n", m.alpha, m.pairs.size());
    return out + buf;
}

}  // namespace snapcorpus::rank
