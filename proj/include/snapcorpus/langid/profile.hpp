#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace snapcorpus::langid {

inline constexpr std::size_t k_profile_size = 400;
inline constexpr std::size_t k_min_sample_chars = 1000;
inline constexpr std::size_t k_min_classify_chars = 20;
inline constexpr const char* k_undetermined = "und";

/// Ranked character n-grams (n = 1..4) of one language. Rank 1 is the most
/// frequent n-gram.
class LanguageProfile {
  public:
    LanguageProfile() = default;
    LanguageProfile(std::string lang, std::vector<std::string> ranked);

    const std::string& lang() const { return lang_; }
    const std::vector<std::string>& ngrams() const { return ranked_; }
    std::size_t size() const { return ranked_.size(); }
    /// 1-based rank, or 0 when the n-gram is not in the profile.
    std::size_t rank(const std::string& ngram) const;

    bool operator==(const LanguageProfile& o) const { return lang_ == o.lang_ && ranked_ == o.ranked_; }

  private:
    std::string lang_;
    std::vector<std::string> ranked_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Number of Unicode code points in UTF-8 text (invalid bytes count as one).
std::size_t count_chars(std::string_view text);

/// N-gram frequencies ordered by count descending, then n-gram bytewise.
/// Words are maximal letter runs, lowercased and padded with "_".
std::vector<std::pair<std::string, std::size_t>> count_ngrams(std::string_view text);

/// Throws DataError when the sample has fewer than k_min_sample_chars characters.
LanguageProfile train_profile(std::string_view sample, const std::string& lang, std::size_t k = k_profile_size);

/// "ngram \t rank" rows in rank order.
void write_profile(const LanguageProfile& p, const std::filesystem::path& path);
LanguageProfile read_profile(const std::filesystem::path& path, const std::string& lang);

/// Loads every "<lang>.tsv" under dir, ordered by language code.
std::vector<LanguageProfile> load_profiles(const std::filesystem::path& dir);

}  // namespace snapcorpus::langid
