#include <algorithm>

#include "vxt/vxpl.hpp"

namespace vxt::vxpl {

namespace {

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

struct Row {
  int level;
  std::string label;
};

std::string node_label(const MenuTree& tree, std::size_t i) {
  const auto& e = tree.element(i);
  if (const auto* m = std::get_if<Menu>(&e)) return m->prompt;
  if (const auto* item = std::get_if<MenuItem>(&e)) return item->label;
  if (const auto* s = std::get_if<Structured>(&e)) {
    for (auto c : tree.node(i).children) {
      const auto* f = std::get_if<Field>(&tree.element(c));
      if (f != nullptr && f->is_key) return f->value;
    }
    return s->id;
  }
  if (const auto* t = std::get_if<Text>(&e)) {
    constexpr std::size_t kMax = 32;
    if (display_width(t->content) <= kMax) return "Text: " + t->content;
    std::string cut;
    std::size_t width = 0;
    for (char c : t->content) {
      if ((static_cast<unsigned char>(c) & 0xC0) != 0x80 && ++width > kMax) break;
      cut.push_back(c);
    }
    return "Text: " + cut + "...";
  }
  return {};
}

void walk(const MenuTree& tree, std::size_t i, int level, std::vector<Row>& rows) {
  if (std::holds_alternative<Field>(tree.element(i))) return;
  rows.push_back({level, node_label(tree, i)});
  for (auto c : tree.node(i).children) walk(tree, c, level + 1, rows);
}

}  // namespace

std::string render_levels(const MenuTree& tree) {
  std::vector<Row> rows;
  walk(tree, tree.root_index(), 1, rows);
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto* m = std::get_if<Menu>(&tree.element(i));
    // A promoted direct child of the root is already listed there.
    if (m != nullptr && m->promote && tree.node(i).parent && *tree.node(i).parent != tree.root_index()) {
      walk(tree, i, 2, rows);
    }
  }

  int levels = 0;
  for (const auto& r : rows) levels = std::max(levels, r.level);
  std::vector<std::size_t> width(static_cast<std::size_t>(levels), 0);
  for (int l = 1; l <= levels; ++l) width[l - 1] = display_width("Level " + std::to_string(l));
  for (const auto& r : rows) {
    width[r.level - 1] = std::max(width[r.level - 1], display_width(r.label));
  }

  auto indent = [&](int level) {
    std::size_t n = 0;
    for (int l = 1; l < level; ++l) n += width[l - 1] + 2;
    return std::string(n, ' ');
  };

  std::string out;
  for (int l = 1; l <= levels; ++l) {
    const std::string header = "Level " + std::to_string(l);
    out += header;
    if (l < levels) out += std::string(width[l - 1] + 2 - display_width(header), ' ');
  }
  out += '\n';
  for (const auto& r : rows) out += indent(r.level) + r.label + '\n';
  return out;
}

}  // namespace vxt::vxpl
