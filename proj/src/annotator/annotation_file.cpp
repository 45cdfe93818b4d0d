#include <algorithm>
#include <map>
#include <set>

#include "vxt/annotator.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"
#include "vxt/xml.hpp"

namespace vxt::annotate {

namespace {

std::string where(const dom::Node& el) { return "line " + std::to_string(el.line) + ": "; }

[[noreturn]] void schema_error(const dom::Node& el, const std::string& what) {
  throw Error(ErrorCode::schema, where(el) + what);
}

void check_attributes(const dom::Node& el, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : el.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      schema_error(el, "<" + el.name + "> does not take attribute " + k);
    }
  }
}

const std::string& required(const dom::Node& el, std::string_view attr) {
  const std::string* v = el.attr(attr);
  if (v == nullptr || v->empty()) schema_error(el, "<" + el.name + "> requires " + std::string(attr) + "=");
  return *v;
}

std::optional<std::string> optional_attr(const dom::Node& el, std::string_view attr) {
  if (const auto* v = el.attr(attr)) return *v;
  return std::nullopt;
}

dom::NodePath path_attr(const dom::Node& el, std::string_view attr, bool absolute) {
  dom::NodePath p;
  try {
    p = dom::NodePath::parse(required(el, attr));
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, where(el) + e.what());
  }
  if (p.absolute() != absolute) {
    schema_error(el, std::string(attr) + "=\"" + p.str() + "\" must be " +
                         (absolute ? "an absolute path" : "a relative path (no leading '/')"));
  }
  return p;
}

void no_children(const dom::Node& el) {
  for (const auto& c : el.children) {
    if (c.is_element()) schema_error(c, "unexpected <" + c.name + "> inside <" + el.name + ">");
  }
}

MenuDecl parse_menu(const dom::Node& el) {
  check_attributes(el, {"id", "parent", "promote"});
  MenuDecl m;
  m.line = el.line;
  m.id = required(el, "id");
  m.parent_id = optional_attr(el, "parent");
  if (const auto* p = el.attr("promote")) {
    if (*p != "true" && *p != "false") schema_error(el, "promote must be \"true\" or \"false\"");
    m.promote = *p == "true";
  }
  for (const auto& c : el.children) {
    if (!c.is_element()) continue;
    if (c.name != "prompt") schema_error(c, "unexpected <" + c.name + "> inside <menu>");
    if (!std::holds_alternative<std::monostate>(m.prompt)) schema_error(c, "menu has more than one <prompt>");
    check_attributes(c, {"from"});
    no_children(c);
    if (c.attr("from") != nullptr) {
      m.prompt = path_attr(c, "from", true);
    } else {
      m.prompt = text::collapse_whitespace(xml::direct_text(c));
    }
  }
  return m;
}

MenuItems parse_menu_items(const dom::Node& el) {
  check_attributes(el, {"parent", "from", "row", "link"});
  no_children(el);
  MenuItems d;
  d.line = el.line;
  d.parent_id = required(el, "parent");
  d.rows = path_attr(el, "from", true);
  d.row_name = optional_attr(el, "row");
  d.link = el.attr("link") != nullptr ? path_attr(el, "link", false) : dom::NodePath::parse(".");
  return d;
}

RecordList parse_record_list(const dom::Node& el) {
  check_attributes(el, {"parent", "from", "row", "id-prefix"});
  RecordList d;
  d.line = el.line;
  d.parent_id = required(el, "parent");
  d.rows = path_attr(el, "from", true);
  d.row_name = optional_attr(el, "row");
  d.id_prefix = optional_attr(el, "id-prefix").value_or(d.parent_id);
  for (const auto& c : el.children) {
    if (!c.is_element()) continue;
    no_children(c);
    FieldRule rule;
    rule.line = c.line;
    if (c.name == "key") {
      check_attributes(c, {"from"});
      rule.is_key = true;
    } else if (c.name == "field") {
      check_attributes(c, {"name", "name-from", "from"});
      rule.name = optional_attr(c, "name");
      if (c.attr("name-from") != nullptr) rule.name_from = path_attr(c, "name-from", false);
      if (rule.name.has_value() == rule.name_from.has_value()) {
        schema_error(c, "<field> needs exactly one of name= and name-from=");
      }
    } else {
      schema_error(c, "unexpected <" + c.name + "> inside <record-list>");
    }
    rule.from = path_attr(c, "from", false);
    d.fields.push_back(std::move(rule));
  }
  return d;
}

std::string_view directive_parent(const Directive& d) {
  if (const auto* m = std::get_if<MenuDecl>(&d)) return m->parent_id ? std::string_view(*m->parent_id) : "";
  if (const auto* m = std::get_if<MenuItems>(&d)) return m->parent_id;
  if (const auto* r = std::get_if<RecordList>(&d)) return r->parent_id;
  if (const auto* t = std::get_if<TextBlock>(&d)) return t->parent_id;
  return {};
}

std::size_t directive_line(const Directive& d) {
  return std::visit([](const auto& x) { return x.line; }, d);
}

}  // namespace

Program parse_annotation_file(std::string_view input) {
  const dom::Node root = xml::parse(input);
  if (root.name != "annotations") {
    schema_error(root, "annotation file root must be <annotations>, found <" + root.name + ">");
  }
  Program program;
  for (const auto& el : root.children) {
    if (!el.is_element()) continue;
    if (el.name == "menu") {
      program.directives.emplace_back(parse_menu(el));
    } else if (el.name == "menu-items") {
      program.directives.emplace_back(parse_menu_items(el));
    } else if (el.name == "record-list") {
      program.directives.emplace_back(parse_record_list(el));
    } else if (el.name == "text-block") {
      check_attributes(el, {"parent", "from"});
      no_children(el);
      program.directives.emplace_back(TextBlock{required(el, "parent"), path_attr(el, "from", true), el.line});
    } else if (el.name == "remove") {
      check_attributes(el, {"target"});
      no_children(el);
      program.directives.emplace_back(Remove{path_attr(el, "target", true), el.line});
    } else {
      schema_error(el, "unknown directive <" + el.name + ">");
    }
  }

  std::vector<std::string> problems;
  std::map<std::string, std::size_t, std::less<>> menu_lines;
  std::size_t roots = 0;
  for (const auto& d : program.directives) {
    const auto* m = std::get_if<MenuDecl>(&d);
    if (m == nullptr) continue;
    if (!m->parent_id) ++roots;
    auto [it, inserted] = menu_lines.emplace(m->id, m->line);
    if (!inserted) {
      problems.push_back("duplicate id \"" + m->id + "\" declared on line " + std::to_string(it->second) +
                         " and line " + std::to_string(m->line));
    }
  }
  if (roots == 0) problems.push_back("no root menu (a <menu> without parent=)");
  if (roots > 1) problems.push_back(std::to_string(roots) + " root menus; exactly one <menu> may omit parent=");

  std::set<std::string, std::less<>> prefixes;
  for (const auto& d : program.directives) {
    const auto parent = directive_parent(d);
    if (!parent.empty() && !menu_lines.contains(parent)) {
      problems.push_back("line " + std::to_string(directive_line(d)) + ": parent \"" + std::string(parent) +
                         "\" is not a declared menu");
    }
    if (const auto* r = std::get_if<RecordList>(&d)) {
      const bool has_key = std::any_of(r->fields.begin(), r->fields.end(), [](const FieldRule& f) { return f.is_key; });
      if (!has_key) problems.push_back("line " + std::to_string(r->line) + ": <record-list> needs at least one <key>");
      if (!prefixes.insert(r->id_prefix).second) {
        problems.push_back("line " + std::to_string(r->line) + ": id-prefix \"" + r->id_prefix +
                           "\" is not unique");
      }
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::validation, msg);
  }
  return program;
}

}  // namespace vxt::annotate
