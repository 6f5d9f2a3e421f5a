#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "snapcorpus/langid/profile.hpp"

namespace snapcorpus::langid {

struct Classification {
    std::string lang;
    std::size_t distance = 0;
};

/// Out-of-place distance between a document profile and a language profile.
/// N-grams missing from the language profile cost the language profile size.
std::size_t out_of_place(const LanguageProfile& doc, const LanguageProfile& lang);

/// Nearest profile by out-of-place distance, ties to the smaller language
/// code. Short or letterless texts give "und".
Classification classify(std::string_view text, const std::vector<LanguageProfile>& profiles);

struct LanguageShare {
    std::string label;
    std::size_t count = 0;
    double percent = 0.0;  // one decimal
};

/// Percentages over all labels. Codes outside `named` (including "und") are
/// pooled into "All Others", which is listed last. Named rows are ordered by
/// count descending. Rounding uses largest remainders so the column sums to
/// exactly 100.0.
std::vector<LanguageShare> language_report(const std::vector<std::string>& labels,
                                           const std::vector<std::string>& named);

std::string format_language_report(const std::vector<LanguageShare>& rows);

}  // namespace snapcorpus::langid
