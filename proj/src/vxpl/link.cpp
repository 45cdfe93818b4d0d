#include <algorithm>
#include <map>
#include <set>

#include "vxt/vxpl.hpp"

namespace vxt::vxpl {

std::optional<std::size_t> MenuTree::find(std::string_view id) const {
  for (std::size_t i = 0; i < doc_.elements.size(); ++i) {
    if (element_id(doc_.elements[i]) == id) return i;
  }
  return std::nullopt;
}

namespace {

std::string describe(const Element& e, std::size_t index) {
  std::string out = "<" + std::string(kind_name(e)) + ">";
  if (auto id = element_id(e); !id.empty()) out += " \"" + std::string(id) + "\"";
  out += " (element " + std::to_string(index + 1) + ")";
  return out;
}

}  // namespace

LinkResult link_and_validate(const Document& doc) {
  LinkResult result;
  auto& diags = result.diagnostics;
  const auto& els = doc.elements;

  std::map<std::string, std::size_t, std::less<>> by_id;
  for (std::size_t i = 0; i < els.size(); ++i) {
    const auto id = element_id(els[i]);
    if (id.empty()) continue;
    auto [it, inserted] = by_id.emplace(std::string(id), i);
    if (!inserted) {
      diags.push_back("duplicate id \"" + std::string(id) + "\": " + describe(els[it->second], it->second) +
                      " and " + describe(els[i], i));
    }
  }

  std::vector<std::size_t> roots;
  // Resolved parent index per element (only when the reference is valid).
  std::vector<std::optional<std::size_t>> parent(els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    const auto pid = element_parent(els[i]);
    if (pid.empty()) {
      roots.push_back(i);
      continue;
    }
    auto it = by_id.find(pid);
    if (it == by_id.end()) {
      diags.push_back("dangling parentid \"" + std::string(pid) + "\" on " + describe(els[i], i));
      continue;
    }
    const auto& target = els[it->second];
    const bool wants_record = std::holds_alternative<Field>(els[i]);
    const bool ok_kind = wants_record ? std::holds_alternative<Structured>(target)
                                      : std::holds_alternative<Menu>(target);
    if (!ok_kind) {
      diags.push_back("parentid \"" + std::string(pid) + "\" on " + describe(els[i], i) + " must name a " +
                      (wants_record ? "structured element" : "menu"));
      continue;
    }
    parent[i] = it->second;
  }

  if (roots.empty()) {
    diags.push_back("no root menu (every menu has a parentid)");
  } else if (roots.size() > 1) {
    std::string list;
    for (auto r : roots) list += (list.empty() ? "" : ", ") + std::string(element_id(els[r]));
    diags.push_back("multiple root menus: " + list);
  }

  // Cycles: follow parent links; a walk that revisits a node of the same walk
  // has found a cycle. Report each distinct cycle once.
  std::vector<int> state(els.size(), 0);  // 0 new, 1 on current walk, 2 done
  std::set<std::set<std::string>> reported;
  for (std::size_t start = 0; start < els.size(); ++start) {
    std::vector<std::size_t> walk;
    std::optional<std::size_t> cur = start;
    while (cur && state[*cur] == 0) {
      state[*cur] = 1;
      walk.push_back(*cur);
      cur = parent[*cur];
    }
    if (cur && state[*cur] == 1) {
      auto from = std::find(walk.begin(), walk.end(), *cur);
      std::set<std::string> members;
      for (auto it = from; it != walk.end(); ++it) members.emplace(element_id(els[*it]));
      if (reported.insert(members).second) {
        std::string list;
        for (const auto& m : members) list += (list.empty() ? "" : ", ") + m;
        diags.push_back("parentid cycle among {" + list + "}");
      }
    }
    for (auto w : walk) state[w] = 2;
  }

  for (std::size_t i = 0; i < els.size(); ++i) {
    const auto* s = std::get_if<Structured>(&els[i]);
    if (s == nullptr) continue;
    const bool has_key = std::any_of(els.begin(), els.end(), [&](const Element& e) {
      const auto* f = std::get_if<Field>(&e);
      return f != nullptr && f->is_key && f->parent_id == s->id;
    });
    if (!has_key) diags.push_back("structured \"" + s->id + "\" has no key field");
  }

  if (!diags.empty()) return result;

  std::vector<TreeNode> nodes(els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    nodes[i].element = i;
    nodes[i].parent = parent[i];
    if (parent[i]) nodes[*parent[i]].children.push_back(i);
  }
  const std::size_t root = roots.front();
  std::vector<std::size_t> pending{root};
  std::vector<bool> reached(els.size(), false);
  reached[root] = true;
  while (!pending.empty()) {
    const auto n = pending.back();
    pending.pop_back();
    for (auto c : nodes[n].children) {
      nodes[c].depth = nodes[n].depth + 1;
      reached[c] = true;
      pending.push_back(c);
    }
  }
  for (std::size_t i = 0; i < els.size(); ++i) {
    if (!reached[i]) diags.push_back(describe(els[i], i) + " is not reachable from the root menu");
  }
  if (!diags.empty()) return result;

  result.tree.emplace(doc, std::move(nodes), root);
  return result;
}

}  // namespace vxt::vxpl
