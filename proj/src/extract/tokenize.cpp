#include "snapcorpus/extract/tokenize.hpp"

namespace snapcorpus::extract {

namespace {

bool is_alnum_ascii(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

}  // namespace

TokenSeq tokenize(std::string_view text)
{
    TokenSeq out;
    std::string cur;
    for (char c : text) {
        if (is_alnum_ascii(c)) {
            cur += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

TokenSeq tokenize_url(std::string_view url) { return tokenize(url); }

std::size_t count_tokens(std::string_view text)
{
    std::size_t n = 0;
    bool in_token = false;
    for (char c : text) {
        bool a = is_alnum_ascii(c);
        n += a && !in_token;
        in_token = a;
    }
    return n;
}

std::string join_tokens(const TokenSeq& tokens)
{
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) {
            out += ' ';
        }
        out += t;
    }
    return out;
}

}  // namespace snapcorpus::extract
