#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace snapcorpus::rank {

struct TTest {
    double t = 0.0;
    double p = 1.0;  // two-sided
    std::size_t n = 0;
};

/// Two-sided p-value of Student's t with df degrees of freedom, via the
/// regularized incomplete beta function.
double student_t_two_sided_p(double t, double df);

/// Paired t-test on per-query differences a - b. Zero-variance differences
/// give p = 1 when the mean difference is 0 and p = 0 otherwise. Throws
/// DataError when the key sets differ or n < 2.
TTest paired_ttest(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

struct NamedScores {
    std::string name;
    std::map<std::string, double> per_query;
};

struct PairTest {
    std::size_t i = 0;
    std::size_t j = 0;
    TTest test;
    double adjusted_p = 1.0;  // Bonferroni, capped at 1
    bool significant = false;
};

struct SignificanceMatrix {
    std::vector<std::string> systems;
    std::vector<double> means;
    std::vector<PairTest> pairs;  // i < j, in row-major order
    double alpha = 0.05;

    /// Letters ("a", "b", ...) of the systems not significantly different
    /// from system i.
    std::string nonsignificant_letters(std::size_t i) const;
};

/// All unordered pairs, Bonferroni-adjusted by the number of pairs. Throws
/// DataError when fewer than 2 systems are given or query sets differ.
SignificanceMatrix significance_matrix(const std::vector<NamedScores>& systems, double alpha = 0.05);

/// system_a \t system_b \t t \t p \t p_adjusted \t significant rows.
std::string format_significance_tsv(const SignificanceMatrix& m);
/// One row per system: letter, name, mean with superscript-style letters.
std::string format_significance_table(const SignificanceMatrix& m, const std::string& measure);

std::string system_letter(std::size_t i);

}  // namespace snapcorpus::rank
