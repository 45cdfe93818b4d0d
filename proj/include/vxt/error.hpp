#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vxt {

enum class ErrorCode {
  parse,        // malformed XML / syntax
  schema,       // unknown element or attribute combination
  validation,   // invariant violated
  no_match,     // E_NOMATCH: a path resolved to nothing (strict mode)
  ambiguous,    // more than one anchor where one was expected
  unsupported,  // E_UNSUPPORTED: VoiceXML outside the interpreted subset
  target,       // E_TARGET: unresolved goto/choice target
  usage,        // API misuse
  io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vxt
