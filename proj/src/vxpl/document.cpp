#include <map>

#include "vxt/error.hpp"
#include "vxt/text.hpp"
#include "vxt/vxpl.hpp"
#include "vxt/xml.hpp"

namespace vxt::vxpl {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void schema_error(const dom::Node& at, const std::string& what) {
  throw Error(ErrorCode::schema, "line " + std::to_string(at.line) + ": " + what);
}

const std::string& required(const dom::Node& el, std::string_view attr) {
  const std::string* v = el.attr(attr);
  if (v == nullptr) schema_error(el, "<" + el.name + "> requires attribute " + std::string(attr));
  return *v;
}

std::string collapsed_text(const dom::Node& el) {
  std::string raw;
  for (const auto& c : el.children) {
    if (c.kind == dom::Node::Kind::text) raw += c.text;
    else if (c.is_element()) schema_error(c, "unexpected <" + c.name + "> inside <" + el.name + ">");
  }
  return text::collapse_whitespace(raw);
}

bool parse_flag(const dom::Node& el, std::string_view attr) {
  const std::string* v = el.attr(attr);
  if (v == nullptr || *v == "false") return false;
  if (*v == "true") return true;
  schema_error(el, std::string(attr) + " must be \"true\" or \"false\"");
}

Menu parse_menu(const dom::Node& el, std::vector<std::string>& diagnostics) {
  Menu m;
  m.id = required(el, "id");
  if (const auto* p = el.attr("parentid")) m.parent_id = *p;
  m.promote = parse_flag(el, "promote");
  bool has_prompt = false;
  for (const auto& c : el.children) {
    if (c.is_element("prompt")) {
      if (has_prompt) schema_error(c, "menu \"" + m.id + "\" has more than one <prompt>");
      m.prompt = collapsed_text(c);
      has_prompt = true;
    } else if (c.is_element()) {
      schema_error(c, "unexpected <" + c.name + "> inside <menu>");
    } else if (c.kind == dom::Node::Kind::text && !text::collapse_whitespace(c.text).empty()) {
      schema_error(el, "stray text inside <menu id=\"" + m.id + "\">");
    }
  }
  if (!has_prompt) {
    m.prompt = m.id;
    diagnostics.push_back("menu \"" + m.id + "\" has no <prompt>; using its id");
  }
  return m;
}

MenuItem parse_menu_item(const dom::Node& el) {
  MenuItem item;
  item.parent_id = required(el, "parentid");
  const std::string* href = el.attr("href");
  const dom::Node* anchor = nullptr;
  for (const auto& c : el.children) {
    if (c.is_element("a")) {
      if (anchor != nullptr) schema_error(c, "<menuitem> may contain only one <a>");
      anchor = &c;
    } else if (c.is_element()) {
      schema_error(c, "unexpected <" + c.name + "> inside <menuitem>");
    } else if (c.kind == dom::Node::Kind::text && !text::collapse_whitespace(c.text).empty()) {
      schema_error(el, "stray text inside <menuitem>");
    }
  }
  if (anchor != nullptr) {
    if (href != nullptr) schema_error(el, "<menuitem> has both href and an inner <a>");
    item.href = required(*anchor, "href");
    item.label = collapsed_text(*anchor);
  } else if (href != nullptr) {
    item.href = *href;
    const std::string* label = el.attr("label");
    item.label = label != nullptr ? text::collapse_whitespace(*label) : std::string();
  } else {
    schema_error(el, "<menuitem> needs an href attribute or an inner <a href>");
  }
  return item;
}

Field parse_field(const dom::Node& el) {
  Field f;
  f.parent_id = required(el, "parentid");
  f.is_key = parse_flag(el, "key");
  if (const auto* n = el.attr("name")) f.name = *n;
  if (f.is_key == f.name.has_value()) {
    schema_error(el, "<field> must carry exactly one of key=\"true\" and name=");
  }
  f.value = collapsed_text(el);
  return f;
}

void write_attr(std::string& out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  out += text::xml_escape(value, true);
  out += '"';
}

struct IdBijection {
  std::map<std::string, std::string, std::less<>> forward;
  std::map<std::string, std::string, std::less<>> backward;

  bool bind(std::string_view a, std::string_view b) {
    auto f = forward.find(a);
    auto r = backward.find(b);
    if (f != forward.end() || r != backward.end()) {
      return f != forward.end() && r != backward.end() && f->second == b && r->second == a;
    }
    forward.emplace(a, b);
    backward.emplace(b, a);
    return true;
  }
};

}  // namespace

std::string_view kind_name(const Element& e) {
  return std::visit(overloaded{[](const Menu&) { return "menu"; },
                               [](const MenuItem&) { return "menuitem"; },
                               [](const Structured&) { return "structured"; },
                               [](const Field&) { return "field"; },
                               [](const Text&) { return "text"; }},
                    e);
}

std::string_view element_id(const Element& e) {
  if (const auto* m = std::get_if<Menu>(&e)) return m->id;
  if (const auto* s = std::get_if<Structured>(&e)) return s->id;
  return {};
}

std::string_view element_parent(const Element& e) {
  return std::visit(overloaded{[](const Menu& m) -> std::string_view {
                                 return m.parent_id ? std::string_view(*m.parent_id) : std::string_view();
                               },
                               [](const auto& x) -> std::string_view { return x.parent_id; }},
                    e);
}

ParseOutput parse(std::string_view input) {
  const dom::Node root = xml::parse(input);
  if (root.name != "root") {
    throw Error(ErrorCode::schema, "line " + std::to_string(root.line) +
                                       ": VXPL document element must be <root>, found <" + root.name + ">");
  }
  ParseOutput out;
  for (const auto& el : root.children) {
    if (!el.is_element()) {
      if (el.kind == dom::Node::Kind::text && !text::collapse_whitespace(el.text).empty()) {
        out.diagnostics.push_back("ignored stray text under <root>: \"" +
                                  text::collapse_whitespace(el.text) + "\"");
      }
      continue;
    }
    if (el.name == "menu") {
      out.document.elements.emplace_back(parse_menu(el, out.diagnostics));
    } else if (el.name == "menuitem" || el.name == "menuitems") {
      out.document.elements.emplace_back(parse_menu_item(el));
    } else if (el.name == "structured") {
      Structured s{required(el, "id"), required(el, "parentid")};
      for (const auto& c : el.children) {
        if (c.is_element()) schema_error(c, "<structured> is self-closing; fields are siblings");
      }
      out.document.elements.emplace_back(std::move(s));
    } else if (el.name == "field") {
      out.document.elements.emplace_back(parse_field(el));
    } else if (el.name == "text") {
      out.document.elements.emplace_back(Text{required(el, "parentid"), collapsed_text(el)});
    } else {
      schema_error(el, "unknown VXPL element <" + el.name + ">");
    }
  }
  return out;
}

std::string serialize(const Document& doc) {
  std::string out = "<root>\n";
  for (const auto& e : doc.elements) {
    std::visit(overloaded{
                   [&](const Menu& m) {
                     out += "  <menu";
                     write_attr(out, "id", m.id);
                     if (m.parent_id) write_attr(out, "parentid", *m.parent_id);
                     if (m.promote) write_attr(out, "promote", "true");
                     out += ">\n    <prompt>" + text::xml_escape(m.prompt) + "</prompt>\n  </menu>\n";
                   },
                   [&](const MenuItem& i) {
                     out += "  <menuitem";
                     write_attr(out, "parentid", i.parent_id);
                     write_attr(out, "href", i.href);
                     write_attr(out, "label", i.label);
                     out += "/>\n";
                   },
                   [&](const Structured& s) {
                     out += "  <structured";
                     write_attr(out, "id", s.id);
                     write_attr(out, "parentid", s.parent_id);
                     out += "/>\n";
                   },
                   [&](const Field& f) {
                     out += "  <field";
                     if (f.is_key) write_attr(out, "key", "true");
                     else write_attr(out, "name", f.name.value_or(""));
                     write_attr(out, "parentid", f.parent_id);
                     out += ">" + text::xml_escape(f.value) + "</field>\n";
                   },
                   [&](const Text& t) {
                     out += "  <text";
                     write_attr(out, "parentid", t.parent_id);
                     out += ">" + text::xml_escape(t.content) + "</text>\n";
                   }},
               e);
  }
  out += "</root>\n";
  return out;
}

bool structurally_equal(const Document& a, const Document& b) { return a == b; }

bool equivalent_up_to_ids(const Document& a, const Document& b) {
  if (a.elements.size() != b.elements.size()) return false;
  IdBijection ids;
  auto same_parent = [&](std::string_view x, std::string_view y) {
    return x.empty() == y.empty() && (x.empty() || ids.bind(x, y));
  };
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    const auto& ea = a.elements[i];
    const auto& eb = b.elements[i];
    if (ea.index() != eb.index()) return false;
    if (!element_id(ea).empty() && !ids.bind(element_id(ea), element_id(eb))) return false;
    if (!same_parent(element_parent(ea), element_parent(eb))) return false;
    const bool payload_equal = std::visit(
        overloaded{[&](const Menu& m) {
                     const auto& n = std::get<Menu>(eb);
                     return m.promote == n.promote && m.prompt == n.prompt;
                   },
                   [&](const MenuItem& m) {
                     const auto& n = std::get<MenuItem>(eb);
                     return m.href == n.href && m.label == n.label;
                   },
                   [&](const Structured&) { return true; },
                   [&](const Field& f) {
                     const auto& g = std::get<Field>(eb);
                     return f.is_key == g.is_key && f.name == g.name && f.value == g.value;
                   },
                   [&](const Text& t) { return t.content == std::get<Text>(eb).content; }},
        ea);
    if (!payload_equal) return false;
  }
  return true;
}

}  // namespace vxt::vxpl
