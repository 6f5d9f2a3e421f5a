#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace snapcorpus::extract {

/// The payload cannot be treated as a document at all (binary content).
class ExtractError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t k_default_max_tokens = 2'000'000;

struct ExtractedText {
    std::string title;
    std::string body;
    std::string charset;
    bool truncated = false;
};

/// Decodes entities in a run of HTML text (named, decimal and hex forms).
std::string decode_entities(std::string_view text);

/// Extracts the first <title> and the visible body text from HTML that is
/// already UTF-8. Script, style, noscript, template, iframe and noembed
/// content, comments and head metadata are dropped. Block-level boundaries
/// become single spaces; all whitespace runs collapse. Never emits '<'.
ExtractedText extract_from_utf8(std::string_view html);

/// Full pipeline from raw bytes: charset resolution, binary rejection
/// (throws ExtractError), extraction, and truncation of the body to
/// `max_tokens` tokens.
ExtractedText extract_text(std::string_view raw, std::string_view charset_hint = {},
                           std::size_t max_tokens = k_default_max_tokens);

}  // namespace snapcorpus::extract
