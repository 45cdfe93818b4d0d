#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vxt::vxpl {

// VoiceXML Precursor Language: a flat list of elements linked by parentid.

struct Menu {
  std::string id;
  std::optional<std::string> parent_id;
  bool promote = false;
  std::string prompt;
  bool operator==(const Menu&) const = default;
};

struct MenuItem {
  std::string parent_id;
  std::string href;
  std::string label;
  bool operator==(const MenuItem&) const = default;
};

struct Structured {
  std::string id;
  std::string parent_id;
  bool operator==(const Structured&) const = default;
};

struct Field {
  std::string parent_id;
  bool is_key = false;
  std::optional<std::string> name;  // set iff !is_key
  std::string value;
  bool operator==(const Field&) const = default;
};

struct Text {
  std::string parent_id;
  std::string content;
  bool operator==(const Text&) const = default;
};

using Element = std::variant<Menu, MenuItem, Structured, Field, Text>;

struct Document {
  std::vector<Element> elements;
  bool operator==(const Document&) const = default;
};

std::string_view kind_name(const Element& e);
// Own id for Menu/Structured, empty otherwise.
std::string_view element_id(const Element& e);
// Parent id; empty for the root menu.
std::string_view element_parent(const Element& e);

struct ParseOutput {
  Document document;
  std::vector<std::string> diagnostics;  // non-fatal (e.g. defaulted prompt)
};

/// Reads the VXPL XML format. Accepts <menuitem> and <menuitems>, with the
/// link either as href/label attributes or as a single inner <a href>.
/// Throws Error(parse) for malformed XML, Error(schema) for unknown elements
/// or a field with both/neither of key and name.
ParseOutput parse(std::string_view input);

/// Canonical XML: fixed attribute order, 2-space indentation, document order.
std::string serialize(const Document& doc);

/// Exact structural equality (same as operator==, spelled out for tests).
bool structurally_equal(const Document& a, const Document& b);

/// Structural equality up to a consistent one-to-one renaming of Menu and
/// Structured ids (parent references renamed accordingly).
bool equivalent_up_to_ids(const Document& a, const Document& b);

// --- resolved tree ---------------------------------------------------------

struct TreeNode {
  std::size_t element = 0;  // index into Document::elements
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;  // node indices, document order
  int depth = 1;                      // root menu is level 1
};

/// Resolved hierarchy. nodes[i] describes doc.elements[i].
class MenuTree {
 public:
  MenuTree(Document doc, std::vector<TreeNode> nodes, std::size_t root)
      : doc_(std::move(doc)), nodes_(std::move(nodes)), root_(root) {}

  const Document& document() const { return doc_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  const TreeNode& root() const { return nodes_.at(root_); }
  std::size_t root_index() const { return root_; }
  const Element& element(std::size_t i) const { return doc_.elements.at(i); }

  // Index of the Menu/Structured with this id, if any.
  std::optional<std::size_t> find(std::string_view id) const;

 private:
  Document doc_;
  std::vector<TreeNode> nodes_;
  std::size_t root_;
};

struct LinkResult {
  std::optional<MenuTree> tree;          // set iff diagnostics is empty
  std::vector<std::string> diagnostics;  // every violation found
  bool ok() const { return tree.has_value(); }
};

/// Resolve parent references into a MenuTree. Reports dangling or ill-typed
/// parents, duplicate ids, cycles, zero/multiple roots and key-less records.
LinkResult link_and_validate(const Document& doc);

/// Level-column rendering of the dialog menu structure: one row per node,
/// label in the column of its level, promoted menus repeated under the root.
/// Fields are not shown; records show their first key value.
std::string render_levels(const MenuTree& tree);

}  // namespace vxt::vxpl
