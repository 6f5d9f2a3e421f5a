#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace snapcorpus::extract {

/// Lowercase ASCII alphanumeric tokens in text order.
using TokenSeq = std::vector<std::string>;

/// Splits on every byte outside [A-Za-z0-9] and case-folds. Non-ASCII bytes
/// act as separators.
TokenSeq tokenize(std::string_view text);

/// The same rule applied to the whole URL string (scheme, host, path, query).
TokenSeq tokenize_url(std::string_view url);

/// Number of tokens, without materializing them.
std::size_t count_tokens(std::string_view text);

std::string join_tokens(const TokenSeq& tokens);

}  // namespace snapcorpus::extract
