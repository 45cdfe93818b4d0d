#pragma once

#include <string>
#include <string_view>

namespace vxt::text {

// Replace every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view input);

// Collapse whitespace runs (ASCII whitespace and U+00A0) to one space, trim ends.
std::string collapse_whitespace(std::string_view input);

// collapse_whitespace + ASCII lowercase. Used for utterance/grammar matching.
std::string normalize_utterance(std::string_view input);

std::string to_lower(std::string_view input);

// Escape &, <, > and (for attributes) the double quote.
std::string xml_escape(std::string_view input, bool attribute = false);

}  // namespace vxt::text
