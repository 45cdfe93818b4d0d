#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vxt/vxml.hpp"

namespace vxt::vxml::detail {

// Flat form/menu model that every Dialog expands to before printing.
struct Op {
  enum Kind { push, pop, say, go, back } kind;
  std::string arg;  // dialog id for push/go, text for say
};

struct FlatForm {
  std::string id;
  std::vector<Op> ops;
};

struct FlatMenu {
  std::string id;
  std::string prompt;
  std::vector<Choice> choices;
};

using Flat = std::variant<FlatForm, FlatMenu>;

// Terminate with '.' unless the text already ends in sentence punctuation.
std::string sentence(std::string_view text);

std::vector<Flat> lower(const Document& doc);

}  // namespace vxt::vxml::detail
