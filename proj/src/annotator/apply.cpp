#include <set>

#include "vxt/annotator.hpp"
#include "vxt/error.hpp"

namespace vxt::annotate {

namespace {

// Removed subtrees are replaced in a working copy by a childless element of
// the same name carrying this attribute, so same-name ordinals of the
// remaining nodes are unchanged. The HTML parser cannot produce an attribute
// name containing a space.
constexpr std::string_view kRemovedMarker = " removed";

bool is_removed(const dom::Node& n) { return n.attr(kRemovedMarker) != nullptr; }

dom::Node prune(const dom::Node& n, const std::set<const dom::Node*>& removed) {
  if (removed.contains(&n)) {
    dom::Node stub = dom::Node::element(n.name);
    stub.attributes.emplace_back(kRemovedMarker, "");
    return stub;
  }
  dom::Node copy;
  copy.kind = n.kind;
  copy.name = n.name;
  copy.attributes = n.attributes;
  copy.text = n.text;
  copy.children.reserve(n.children.size());
  for (const auto& c : n.children) copy.children.push_back(prune(c, removed));
  return copy;
}

std::string label(const Directive& d) {
  struct {
    std::string operator()(const MenuDecl& m) { return "<menu id=\"" + m.id + "\"> (line " + std::to_string(m.line) + ")"; }
    std::string operator()(const MenuItems& m) { return "<menu-items> (line " + std::to_string(m.line) + ")"; }
    std::string operator()(const RecordList& r) { return "<record-list> (line " + std::to_string(r.line) + ")"; }
    std::string operator()(const TextBlock& t) { return "<text-block> (line " + std::to_string(t.line) + ")"; }
    std::string operator()(const Remove& r) { return "<remove> (line " + std::to_string(r.line) + ")"; }
  } v;
  return std::visit(v, d);
}

class Extractor {
 public:
  Extractor(const dom::Node& root, Strictness strictness) : root_(root), strictness_(strictness) {}

  // Resolve an absolute path; nullptr (after reporting) when nothing matches.
  const dom::Node* absolute(const Directive& d, const dom::NodePath& p) {
    const dom::Node* n = dom::resolve_path(root_, p);
    return checked(d, n, p, "");
  }

  const dom::Node* relative(const Directive& d, const dom::Node& row, const dom::NodePath& p,
                            const std::string& row_desc) {
    const dom::Node* n = dom::resolve_relative(row, p);
    return checked(d, n, p, row_desc);
  }

  std::optional<dom::Link> link(const Directive& d, const dom::Node& n) {
    try {
      return dom::extract_link(n);
    } catch (const Error& e) {
      throw Error(ErrorCode::ambiguous, label(d) + ": " + e.what());
    }
  }

  std::vector<const dom::Node*> rows(const dom::Node& container, const std::optional<std::string>& row_name) {
    std::vector<const dom::Node*> out;
    for (const auto* c : dom::element_children(container)) {
      if (row_name && c->name != *row_name) continue;
      if (is_removed(*c)) continue;
      out.push_back(c);
    }
    return out;
  }

  void note(std::string message) { diagnostics.push_back(std::move(message)); }

  std::vector<std::string> diagnostics;

 private:
  const dom::Node* checked(const Directive& d, const dom::Node* n, const dom::NodePath& p,
                           const std::string& row_desc) {
    std::string why;
    if (n == nullptr) why = "matched nothing";
    else if (is_removed(*n)) why = "addresses a removed region";
    else return n;
    std::string msg = "E_NOMATCH: " + label(d) + ": path " + p.str();
    if (!row_desc.empty()) msg += " (from " + row_desc + ")";
    msg += " " + why;
    if (strictness_ == Strictness::strict) throw Error(ErrorCode::no_match, msg);
    note(msg + "; skipped");
    return nullptr;
  }

  const dom::Node& root_;
  Strictness strictness_;
};

}  // namespace

Extraction apply_annotations(const Program& program, const dom::Node& source, Strictness strictness) {
  // Removes first, against the original tree.
  std::set<const dom::Node*> removed;
  Extractor finder(source, strictness);
  for (const auto& d : program.directives) {
    if (const auto* r = std::get_if<Remove>(&d)) {
      if (const auto* n = finder.absolute(d, r->target)) removed.insert(n);
    }
  }
  const dom::Node pruned = prune(source, removed);
  Extractor ex(pruned, strictness);
  ex.diagnostics = std::move(finder.diagnostics);
  Extraction result;
  auto& out = result.document.elements;

  for (const auto& d : program.directives) {
    if (const auto* m = std::get_if<MenuDecl>(&d)) {
      vxpl::Menu menu{m->id, m->parent_id, m->promote, m->id};
      if (const auto* literal = std::get_if<std::string>(&m->prompt)) {
        menu.prompt = *literal;
      } else if (const auto* path = std::get_if<dom::NodePath>(&m->prompt)) {
        if (const auto* n = ex.absolute(d, *path)) menu.prompt = dom::inner_text(*n);
        else ex.note("menu \"" + m->id + "\" prompt defaulted to its id");
      }
      out.emplace_back(std::move(menu));
    } else if (const auto* mi = std::get_if<MenuItems>(&d)) {
      const auto* container = ex.absolute(d, mi->rows);
      if (container == nullptr) continue;
      const auto rows = ex.rows(*container, mi->row_name);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string row_desc = "row " + std::to_string(k + 1);
        const auto* target = ex.relative(d, *rows[k], mi->link, row_desc);
        if (target == nullptr) continue;
        if (auto link = ex.link(d, *target)) {
          out.emplace_back(vxpl::MenuItem{mi->parent_id, link->href, link->label});
        }
      }
    } else if (const auto* rl = std::get_if<RecordList>(&d)) {
      const auto* container = ex.absolute(d, rl->rows);
      if (container == nullptr) continue;
      const auto rows = ex.rows(*container, rl->row_name);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string id = rl->id_prefix + "-" + std::to_string(k + 1);
        const std::string row_desc = "record " + id;
        std::vector<vxpl::Element> record{vxpl::Structured{id, rl->parent_id}};
        bool keep = true;
        for (const auto& rule : rl->fields) {
          const auto* n = ex.relative(d, *rows[k], rule.from, row_desc);
          std::optional<std::string> name = rule.name;
          if (n != nullptr && rule.name_from) {
            if (const auto* nn = ex.relative(d, *rows[k], *rule.name_from, row_desc)) {
              name = dom::inner_text(*nn);
            } else {
              n = nullptr;
            }
          }
          if (n == nullptr) {
            if (rule.is_key) {
              keep = false;
              ex.note("record " + id + " dropped: key field missing");
              break;
            }
            continue;
          }
          if (rule.is_key) {
            record.emplace_back(vxpl::Field{id, true, std::nullopt, dom::inner_text(*n)});
          } else {
            record.emplace_back(vxpl::Field{id, false, name, dom::inner_text(*n)});
          }
        }
        if (keep) out.insert(out.end(), record.begin(), record.end());
      }
    } else if (const auto* tb = std::get_if<TextBlock>(&d)) {
      if (const auto* n = ex.absolute(d, tb->from)) {
        out.emplace_back(vxpl::Text{tb->parent_id, dom::inner_text(*n)});
      }
    }
  }
  result.diagnostics = std::move(ex.diagnostics);
  return result;
}

}  // namespace vxt::annotate
