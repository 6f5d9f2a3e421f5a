#include "snapcorpus/langid/profile.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "snapcorpus/common/error.hpp"
#include "snapcorpus/common/text.hpp"

namespace snapcorpus::langid {

namespace {

// Decodes one code point; invalid sequences yield U+FFFD and consume a byte.
char32_t next_code_point(std::string_view s, std::size_t& i)
{
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < len; ++k) {
        auto cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_letter(char32_t c)
{
    if (c < 0x80) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    }
    if (c < 0xC0 || c == 0xD7 || c == 0xF7 || c == 0xFFFD) {
        return false;
    }
    if ((c >= 0x2000 && c <= 0x206F) || (c >= 0x3000 && c <= 0x303F)) {
        return false;
    }
    if (c >= 0xFF01 && c <= 0xFF65) {
        bool fw_letter = (c >= 0xFF21 && c <= 0xFF3A) || (c >= 0xFF41 && c <= 0xFF5A);
        return fw_letter;
    }
    return true;
}

char32_t fold_case(char32_t c)
{
    if (c >= 'A' && c <= 'Z') {
        return c + 0x20;
    }
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) {
        return c + 0x20;
    }
    if (c >= 0x410 && c <= 0x42F) {
        return c + 0x20;
    }
    if (c >= 0x400 && c <= 0x40F) {
        return c + 0x50;
    }
    if (c >= 0x100 && c <= 0x17F && c % 2 == 0 && c != 0x130 && c != 0x138) {
        return c + 1;
    }
    return c;
}

}  // namespace

LanguageProfile::LanguageProfile(std::string lang, std::vector<std::string> ranked)
    : lang_(std::move(lang)), ranked_(std::move(ranked))
{
    for (std::size_t i = 0; i < ranked_.size(); ++i) {
        if (!index_.emplace(ranked_[i], i + 1).second) {
            throw DataError("profile " + lang_ + " repeats n-gram '" + ranked_[i] + "'");
        }
    }
}

std::size_t LanguageProfile::rank(const std::string& ngram) const
{
    auto it = index_.find(ngram);
    return it == index_.end() ? 0 : it->second;
}

std::size_t count_chars(std::string_view text)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size(); ++n) {
        next_code_point(text, i);
    }
    return n;
}

std::vector<std::pair<std::string, std::size_t>> count_ngrams(std::string_view text)
{
    std::map<std::string, std::size_t> counts;
    std::vector<std::string> word;  // encoded code points including padding
    auto flush = [&] {
        if (word.size() > 2) {
            for (std::size_t n = 1; n <= 4; ++n) {
                for (std::size_t i = 0; i + n <= word.size(); ++i) {
                    std::string g;
                    for (std::size_t k = i; k < i + n; ++k) {
                        g += word[k];
                    }
                    ++counts[g];
                }
            }
        }
        word.assign(1, "_");
    };
    word.assign(1, "_");
    for (std::size_t i = 0; i < text.size();) {
        char32_t cp = next_code_point(text, i);
        if (is_letter(cp)) {
            std::string enc;
            append_utf8(enc, fold_case(cp));
            word.push_back(std::move(enc));
        } else if (word.size() > 1) {
            word.emplace_back("_");
            flush();
        }
    }
    if (word.size() > 1) {
        word.emplace_back("_");
        flush();
    }
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

LanguageProfile train_profile(std::string_view sample, const std::string& lang, std::size_t k)
{
    auto n = count_chars(sample);
    if (n < k_min_sample_chars) {
        throw DataError("training sample for '" + lang + "' has " + std::to_string(n) + " characters, need " +
                        std::to_string(k_min_sample_chars));
    }
    auto counts = count_ngrams(sample);
    std::vector<std::string> ranked;
    for (std::size_t i = 0; i < counts.size() && i < k; ++i) {
        ranked.push_back(counts[i].first);
    }
    return LanguageProfile(lang, std::move(ranked));
}

void write_profile(const LanguageProfile& p, const std::filesystem::path& path)
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out += p.ngrams()[i] + "\t" + std::to_string(i + 1) + "\n";
    }
    write_file_atomic(path, out);
}

LanguageProfile read_profile(const std::filesystem::path& path, const std::string& lang)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open profile " + path.string());
    }
    std::vector<std::string> ranked;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 2 || f[0].empty() || f[1] != std::to_string(ranked.size() + 1)) {
            throw LineError(line_no, "bad profile row in " + path.string() + ": " + line);
        }
        ranked.emplace_back(f[0]);
    }
    return LanguageProfile(lang, std::move(ranked));
}

std::vector<LanguageProfile> load_profiles(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("profile directory not found: " + dir.string());
    }
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".tsv") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<LanguageProfile> out;
    for (const auto& f : files) {
        out.push_back(read_profile(f, f.stem().string()));
    }
    if (out.empty()) {
        throw DataError("no language profiles in " + dir.string());
    }
    return out;
}

}  // namespace snapcorpus::langid
