#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vxt::dom {

struct Node {
  enum class Kind { element, text, comment };

  Kind kind = Kind::element;
  std::string name;  // lowercase for HTML; as written for XML
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;  // text/comment payload

  // 1-based line of the start tag when the node came from the XML reader.
  std::size_t line = 0;

  static Node element(std::string name) {
    Node n;
    n.name = std::move(name);
    return n;
  }
  static Node text_node(std::string text) {
    Node n;
    n.kind = Kind::text;
    n.text = std::move(text);
    return n;
  }

  bool is_element() const { return kind == Kind::element; }
  bool is_element(std::string_view tag) const { return kind == Kind::element && name == tag; }

  // First attribute with the given name, or nullptr.
  const std::string* attr(std::string_view key) const;
};

bool operator==(const Node& a, const Node& b);

/// Canonical child-axis address into a tree: "/html/body/table[2]/tr/td[3]".
/// A step's index is the 1-based ordinal among same-name element siblings;
/// "[1]" is omitted in the printed form.
class NodePath {
 public:
  struct Step {
    std::string name;
    std::size_t index = 1;
    bool operator==(const Step&) const = default;
  };

  NodePath() = default;
  NodePath(std::vector<Step> steps, bool absolute);

  // Parses "/a/b[2]" (absolute) or "b[2]/c" (relative). "." is the empty
  // relative path (the context node itself). Throws Error(parse).
  static NodePath parse(std::string_view text);

  const std::vector<Step>& steps() const { return steps_; }
  bool absolute() const { return absolute_; }
  bool empty() const { return steps_.empty(); }

  std::string str() const;

  bool operator==(const NodePath&) const = default;

 private:
  std::vector<Step> steps_;
  bool absolute_ = true;
};

struct ParseResult {
  Node root;
  std::vector<std::string> diagnostics;  // recoveries made by the lenient parser
};

/// Lenient tag-soup HTML parser. Never fails; see html_parser.cpp for the rule set.
ParseResult parse_markup(std::string_view input);

/// Absolute path: the first step must name `root`. Relative path: stepped
/// from `context` (an empty relative path returns `context`).
const Node* resolve_path(const Node& root, const NodePath& path);
const Node* resolve_relative(const Node& context, const NodePath& path);

/// Canonical path of `node` (compared by address). Throws Error(usage) when
/// `node` is not part of `root`'s tree.
NodePath path_of(const Node& root, const Node& node);

/// Depth-first text of all text descendants, whitespace collapsed and trimmed.
std::string inner_text(const Node& node);

struct Link {
  std::string href;
  std::string label;
  bool operator==(const Link&) const = default;
};

/// The single <a href> that is `node` or lies beneath it. Throws
/// Error(ambiguous) when more than one anchor with href is found.
std::optional<Link> extract_link(const Node& node);

/// Element children only, in order.
std::vector<const Node*> element_children(const Node& node);

}  // namespace vxt::dom
