#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vxt/dom.hpp"
#include "vxt/vxpl.hpp"

namespace vxt::annotate {

// Directives of an external annotation file. Every directive remembers the
// line it was declared on for diagnostics.

struct MenuDecl {
  std::string id;
  std::optional<std::string> parent_id;
  bool promote = false;
  // Literal prompt text, a path whose inner text is the prompt, or neither
  // (the prompt then defaults to the id).
  std::variant<std::monostate, std::string, dom::NodePath> prompt;
  std::size_t line = 0;
};

struct FieldRule {
  bool is_key = false;
  std::optional<std::string> name;         // literal field name
  std::optional<dom::NodePath> name_from;  // or read from the row
  dom::NodePath from;                      // relative to the row
  std::size_t line = 0;
};

// Rows are the element children of the node addressed by `rows` (optionally
// only those named `row_name`).
struct MenuItems {
  std::string parent_id;
  dom::NodePath rows;
  std::optional<std::string> row_name;
  dom::NodePath link;  // relative; "." is the row itself
  std::size_t line = 0;
};

struct RecordList {
  std::string parent_id;
  dom::NodePath rows;
  std::optional<std::string> row_name;
  std::string id_prefix;
  std::vector<FieldRule> fields;
  std::size_t line = 0;
};

struct TextBlock {
  std::string parent_id;
  dom::NodePath from;
  std::size_t line = 0;
};

struct Remove {
  dom::NodePath target;
  std::size_t line = 0;
};

using Directive = std::variant<MenuDecl, MenuItems, RecordList, TextBlock, Remove>;

struct Program {
  std::vector<Directive> directives;
};

/// Parse and validate an annotation file. Throws Error(parse) for malformed
/// XML or paths, Error(schema) for unknown elements/attributes, and
/// Error(validation) for duplicate ids, a missing or repeated root menu,
/// undeclared parents and key-less record lists.
Program parse_annotation_file(std::string_view input);

enum class Strictness { strict, lenient };

struct Extraction {
  vxpl::Document document;
  std::vector<std::string> diagnostics;
};

/// Pull-model extraction of a VXPL document from a normalized HTML tree.
/// Remove directives run first; removed subtrees are invisible to every
/// other directive. In strict mode any path that matches nothing throws
/// Error(no_match); in lenient mode the directive (or row) is skipped with a
/// diagnostic. An ambiguous link always throws Error(ambiguous).
Extraction apply_annotations(const Program& program, const dom::Node& root, Strictness strictness);

}  // namespace vxt::annotate
