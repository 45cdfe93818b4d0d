#include "vxt/text.hpp"

#include <cstdint>

#include "vxt/error.hpp"

namespace vxt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse error";
    case ErrorCode::schema: return "schema error";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::no_match: return "E_NOMATCH";
    case ErrorCode::ambiguous: return "ambiguity error";
    case ErrorCode::unsupported: return "E_UNSUPPORTED";
    case ErrorCode::target: return "E_TARGET";
    case ErrorCode::usage: return "usage error";
    case ErrorCode::io: return "I/O error";
  }
  return "error";
}

}  // namespace vxt

namespace vxt::text {

namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
      cp = c & 0x1F;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      cp = c & 0x0F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      cp = c & 0x07;
    } else {
      out += kReplacement;
      ++i;
      continue;
    }
    bool ok = i + len <= in.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(in[i + k]);
      if (!is_continuation(cc)) ok = false;
      else cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong, surrogate and out-of-range encodings.
    if (ok && ((len == 3 && cp < 0x800) || (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
               (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out += kReplacement;
      ++i;
      while (i < in.size() && is_continuation(static_cast<unsigned char>(in[i]))) ++i;
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    std::size_t width = 1;
    if (!space && c == '\xC2' && i + 1 < in.size() && in[i + 1] == '\xA0') {
      space = true;  // U+00A0
      width = 2;
    }
    if (space) {
      pending_space = !out.empty();
      i += width - 1;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string to_lower(std::string_view in) {
  std::string out(in);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_utterance(std::string_view in) { return to_lower(collapse_whitespace(in)); }

std::string xml_escape(std::string_view in, bool attribute) {
  std::string out;
  out.reserve(in.size());
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) out += "&quot;";
        else out.push_back(c);
        break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace vxt::text
