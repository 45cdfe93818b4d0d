#pragma once

#include <string>
#include <string_view>

#include "vxt/dom.hpp"

namespace vxt::xml {

/// Strict, namespace-unaware XML reader. Returns the document element.
/// Text nodes are kept verbatim (including whitespace-only runs); comments
/// and processing instructions are dropped. Throws Error(parse) with
/// "line:column" on malformed input.
dom::Node parse(std::string_view input);

/// Concatenated text of direct text children, not collapsed.
std::string direct_text(const dom::Node& node);

}  // namespace vxt::xml
