// Lenient tag-soup HTML parser.
//
// Rule set (fixed; tests depend on it):
//  1. Input is decoded as UTF-8, invalid bytes become U+FFFD.
//  2. Tag and attribute names are lowercased. Attribute order is kept; a
//     repeated attribute is dropped (first wins); a bare attribute is "".
//  3. <!-- --> becomes a comment node; <!DOCTYPE ...>, <!...> and <?...?> are dropped.
//     A '<' that does not start a tag is text.
//  4. Void elements (area base br col embed hr img input link meta param
//     source track wbr) and any tag written "/>" have no children.
//  5. script/style/textarea/title hold raw text up to their end tag.
//  6. Opening p or a block element (address article aside blockquote div dl
//     fieldset footer form h1-h6 header hr main nav ol pre section table ul)
//     closes an open p; li closes li up to the nearest ul/ol;
//     tr closes td/th/tr up to the nearest table; td/th close td/th up to the
//     nearest tr/table; option closes option; dt/dd close dt/dd.
//  7. An end tag closes up to the innermost open element of that name; an
//     end tag with no open match is dropped.
//  8. A repeated <html>/<head>/<body> start tag is dropped and its attributes
//     merged into the first one.
//  9. End of input closes everything still open.
// 10. The result has exactly one root <html>. Its element children are an
//     optional <head> and a <body>; head-only elements (title meta link style
//     base) seen before body content go to <head>, everything else to <body>,
//     whitespace-only text directly under <html> is dropped. Empty input
//     yields a bare <html>.
//  Character references: &amp; &lt; &gt; &quot; &apos; &nbsp; &copy; and
//  numeric forms are decoded; anything else is kept verbatim.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include "vxt/dom.hpp"
#include "vxt/text.hpp"

namespace vxt::dom {

namespace {

constexpr std::array kVoid = {"area", "base", "br", "col", "embed", "hr", "img",
                              "input", "link", "meta", "param", "source", "track", "wbr"};
constexpr std::array kRawText = {"script", "style", "textarea", "title"};
constexpr std::array kClosesP = {"address", "article", "aside", "blockquote", "div", "dl", "fieldset",
                                 "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr",
                                 "main", "nav", "ol", "p", "pre", "section", "table", "ul"};
constexpr std::array kHeadOnly = {"title", "meta", "link", "style", "base"};
// Elements whose end tag may be omitted without a diagnostic.
constexpr std::array kOptionalEnd = {"p", "li", "tr", "td", "th", "option", "dt", "dd",
                                     "html", "head", "body"};

template <std::size_t N>
bool in(const std::array<const char*, N>& set, std::string_view name) {
  return std::any_of(set.begin(), set.end(), [&](const char* s) { return name == s; });
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view in) {
  struct Named {
    std::string_view name;
    std::uint32_t cp;
  };
  static constexpr std::array<Named, 7> kNamed{{{"amp", '&'},
                                                {"lt", '<'},
                                                {"gt", '>'},
                                                {"quot", '"'},
                                                {"apos", '\''},
                                                {"nbsp", 0xA0},
                                                {"copy", 0xA9}}};
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out.push_back(in[i++]);
      continue;
    }
    const std::size_t semi = in.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(in[i++]);
      continue;
    }
    const auto ref = in.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const auto digits = ref.substr(hex ? 2 : 1);
      bool ok = !digits.empty();
      for (char c : digits) {
        int d = -1;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        if (d < 0 || cp > 0x10FFFF) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      }
      if (ok) {
        append_utf8(out, cp);
        decoded = true;
      }
    } else {
      for (const auto& n : kNamed) {
        if (n.name == ref) {
          append_utf8(out, n.cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(in[i++]);
    }
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_tag_char(char c) { return !is_space(c) && c != '>' && c != '/' && c != '\0'; }

bool whitespace_only(const Node& n) {
  return n.kind == Node::Kind::text &&
         std::all_of(n.text.begin(), n.text.end(), [](char c) { return is_space(c); });
}

class TreeBuilder {
 public:
  explicit TreeBuilder(std::vector<std::string>& diagnostics) : diagnostics_(diagnostics) {
    fragment_.name = "#fragment";
    stack_.push_back(&fragment_);
  }

  void text(std::string content) {
    if (content.empty()) return;
    auto& siblings = top().children;
    if (!siblings.empty() && siblings.back().kind == Node::Kind::text) {
      siblings.back().text += content;
    } else {
      siblings.push_back(Node::text_node(std::move(content)));
    }
  }

  void comment(std::string content) {
    Node n;
    n.kind = Node::Kind::comment;
    n.text = std::move(content);
    top().children.push_back(std::move(n));
  }

  // Returns true when the element was opened (and may take children).
  bool start_tag(std::string name, std::vector<std::pair<std::string, std::string>> attrs,
                 bool self_closing) {
    if (name == "html" || name == "head" || name == "body") {
      auto& seen = deferred_[name];
      if (seen.opened) {
        seen.attributes.insert(seen.attributes.end(), attrs.begin(), attrs.end());
        diagnostics_.push_back("dropped repeated <" + name + "> start tag");
        return false;
      }
      if (name == "head" && deferred_["body"].opened) {
        diagnostics_.push_back("dropped <head> after <body>");
        return false;
      }
      if (name == "html" && stack_.size() > 1) {
        seen.opened = true;
        seen.attributes.insert(seen.attributes.end(), attrs.begin(), attrs.end());
        diagnostics_.push_back("dropped misplaced <html> start tag");
        return false;
      }
      seen.opened = true;
      if (name == "body") close_until_any({"html"}, false);
    }
    implied_end(name);

    Node el = Node::element(name);
    el.attributes = std::move(attrs);
    top().children.push_back(std::move(el));
    Node* node = &top().children.back();
    if (self_closing || in(kVoid, name)) return false;
    stack_.push_back(node);
    return true;
  }

  void end_tag(const std::string& name) {
    if (in(kVoid, name)) return;  // </br> and friends carry no structure
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->name == name) {
        for (std::size_t j = stack_.size() - 1; j > i; --j) {
          if (!in(kOptionalEnd, stack_[j]->name)) {
            diagnostics_.push_back("auto-closed <" + stack_[j]->name + "> at </" + name + ">");
          }
        }
        stack_.resize(i);
        return;
      }
    }
    diagnostics_.push_back("dropped stray </" + name + ">");
  }

  Node finish() {
    for (std::size_t j = stack_.size(); j-- > 1;) {
      if (!in(kOptionalEnd, stack_[j]->name)) {
        diagnostics_.push_back("auto-closed <" + stack_[j]->name + "> at end of input");
      }
    }
    stack_.resize(1);
    return normalize();
  }

 private:
  Node& top() { return *stack_.back(); }

  static void merge_attributes(Node& target,
                               const std::vector<std::pair<std::string, std::string>>& attrs) {
    for (const auto& [k, v] : attrs) {
      if (target.attr(k) == nullptr) target.attributes.emplace_back(k, v);
    }
  }

  // Pop open elements named in `targets` (inclusive when `inclusive`), stopping
  // at any element named in `boundaries`.
  void close_same(std::initializer_list<std::string_view> targets,
                  std::initializer_list<std::string_view> boundaries) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const auto& n = stack_[i]->name;
      if (std::find(boundaries.begin(), boundaries.end(), n) != boundaries.end()) return;
      if (std::find(targets.begin(), targets.end(), n) != targets.end()) {
        stack_.resize(i);
        return;
      }
    }
  }

  void close_until_any(std::initializer_list<std::string_view> names, bool inclusive) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (std::find(names.begin(), names.end(), stack_[i]->name) != names.end()) {
        stack_.resize(inclusive ? i : i + 1);
        return;
      }
    }
    stack_.resize(1);
  }

  void implied_end(std::string_view name) {
    if (in(kClosesP, name)) {
      close_same({"p"}, {"table", "td", "th", "li", "div", "body", "html"});
    } else if (name == "li") {
      close_same({"li"}, {"ul", "ol", "table"});
    } else if (name == "tr") {
      close_same({"tr"}, {"table"});
    } else if (name == "td" || name == "th") {
      close_same({"td", "th"}, {"tr", "table"});
    } else if (name == "option") {
      close_same({"option"}, {"select"});
    } else if (name == "dt" || name == "dd") {
      close_same({"dt", "dd"}, {"dl"});
    }
  }

  Node normalize() {
    std::vector<Node> top_level = std::move(fragment_.children);
    Node html;
    auto html_it = std::find_if(top_level.begin(), top_level.end(),
                                [](const Node& n) { return n.is_element("html"); });
    if (html_it != top_level.end()) {
      html = std::move(*html_it);
      std::vector<Node> merged;
      for (auto it = top_level.begin(); it != html_it; ++it) merged.push_back(std::move(*it));
      for (auto& c : html.children) merged.push_back(std::move(c));
      for (auto it = html_it + 1; it != top_level.end(); ++it) merged.push_back(std::move(*it));
      html.children = std::move(merged);
    } else {
      html = Node::element("html");
      html.children = std::move(top_level);
      if (!html.children.empty()) diagnostics_.push_back("synthesized missing <html>");
    }
    merge_attributes(html, deferred_["html"].attributes);

    std::optional<Node> head;
    std::optional<Node> body;
    std::vector<Node> before_body;
    std::vector<Node> after_body;
    bool content_seen = false;
    for (auto& c : html.children) {
      if (whitespace_only(c)) continue;
      if (c.is_element("head")) {
        if (!head) head = std::move(c);
        else for (auto& g : c.children) head->children.push_back(std::move(g));
        continue;
      }
      if (c.is_element("body") && !body) {
        body = std::move(c);
        content_seen = true;
        continue;
      }
      if (!content_seen && c.is_element() && in(kHeadOnly, c.name)) {
        if (!head) head = Node::element("head");
        head->children.push_back(std::move(c));
        continue;
      }
      if (c.kind != Node::Kind::comment) content_seen = true;
      (body ? after_body : before_body).push_back(std::move(c));
    }
    if (!body && (!before_body.empty() || !after_body.empty())) {
      body = Node::element("body");
      diagnostics_.push_back("synthesized missing <body>");
    }
    if (body) {
      std::vector<Node> kids = std::move(before_body);
      for (auto& c : body->children) kids.push_back(std::move(c));
      for (auto& c : after_body) kids.push_back(std::move(c));
      body->children = std::move(kids);
    }
    if (head) merge_attributes(*head, deferred_["head"].attributes);
    if (body) merge_attributes(*body, deferred_["body"].attributes);
    html.children.clear();
    if (head) html.children.push_back(std::move(*head));
    if (body) html.children.push_back(std::move(*body));
    return html;
  }

  std::vector<std::string>& diagnostics_;
  Node fragment_;
  std::vector<Node*> stack_;
  struct Singleton {
    bool opened = false;
    std::vector<std::pair<std::string, std::string>> attributes;  // from repeated start tags
  };
  std::map<std::string, Singleton, std::less<>> deferred_;
};

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      char a = haystack[i + k];
      if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
      if (a != needle[k]) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

}  // namespace

ParseResult parse_markup(std::string_view raw) {
  ParseResult result;
  const std::string input = text::sanitize_utf8(raw);
  const std::string_view s = input;
  TreeBuilder builder(result.diagnostics);

  std::size_t i = 0;
  std::string pending;
  auto flush_text = [&] {
    if (!pending.empty()) builder.text(decode_entities(pending));
    pending.clear();
  };

  while (i < s.size()) {
    if (s[i] != '<') {
      pending.push_back(s[i++]);
      continue;
    }
    const char next = i + 1 < s.size() ? s[i + 1] : '\0';

    if (s.substr(i, 4) == "<!--") {
      flush_text();
      std::size_t end = s.find("-->", i + 4);
      if (end == std::string_view::npos) {
        result.diagnostics.push_back("unterminated comment");
        builder.comment(std::string(s.substr(i + 4)));
        i = s.size();
      } else {
        builder.comment(std::string(s.substr(i + 4, end - i - 4)));
        i = end + 3;
      }
      continue;
    }
    if (next == '!' || next == '?') {
      flush_text();
      std::size_t end = s.find('>', i);
      i = end == std::string_view::npos ? s.size() : end + 1;
      continue;
    }
    if (next == '/') {
      std::size_t p = i + 2;
      std::size_t name_start = p;
      while (p < s.size() && is_tag_char(s[p])) ++p;
      std::string name = text::to_lower(s.substr(name_start, p - name_start));
      std::size_t end = s.find('>', p);
      flush_text();
      i = end == std::string_view::npos ? s.size() : end + 1;
      if (!name.empty()) builder.end_tag(name);
      continue;
    }
    if (!is_alpha(next)) {
      pending.push_back(s[i++]);
      continue;
    }

    // Start tag.
    flush_text();
    std::size_t p = i + 1;
    std::size_t name_start = p;
    while (p < s.size() && is_tag_char(s[p])) ++p;
    std::string name = text::to_lower(s.substr(name_start, p - name_start));
    std::vector<std::pair<std::string, std::string>> attrs;
    bool self_closing = false;
    while (p < s.size()) {
      while (p < s.size() && is_space(s[p])) ++p;
      if (p >= s.size()) break;
      if (s[p] == '>') {
        ++p;
        break;
      }
      if (s[p] == '/') {
        ++p;
        if (p < s.size() && s[p] == '>') {
          self_closing = true;
          ++p;
          break;
        }
        continue;
      }
      std::size_t an = p;
      while (p < s.size() && !is_space(s[p]) && s[p] != '=' && s[p] != '>' &&
             !(s[p] == '/' && p + 1 < s.size() && s[p + 1] == '>')) {
        ++p;
      }
      std::string attr_name = text::to_lower(s.substr(an, p - an));
      while (p < s.size() && is_space(s[p])) ++p;
      std::string value;
      if (p < s.size() && s[p] == '=') {
        ++p;
        while (p < s.size() && is_space(s[p])) ++p;
        if (p < s.size() && (s[p] == '"' || s[p] == '\'')) {
          const char q = s[p++];
          std::size_t close = s.find(q, p);
          if (close == std::string_view::npos) {
            result.diagnostics.push_back("unterminated attribute value in <" + name + ">");
            close = s.size();
          }
          value = decode_entities(s.substr(p, close - p));
          p = close < s.size() ? close + 1 : close;
        } else {
          std::size_t vs = p;
          while (p < s.size() && !is_space(s[p]) && s[p] != '>') ++p;
          value = decode_entities(s.substr(vs, p - vs));
        }
      }
      if (attr_name.empty()) continue;
      const bool dup = std::any_of(attrs.begin(), attrs.end(),
                                   [&](const auto& a) { return a.first == attr_name; });
      if (dup) {
        result.diagnostics.push_back("dropped duplicate attribute " + attr_name + " on <" + name + ">");
      } else {
        attrs.emplace_back(std::move(attr_name), std::move(value));
      }
    }
    i = p;

    const bool opened = builder.start_tag(name, std::move(attrs), self_closing);
    if (opened && in(kRawText, name)) {
      std::size_t end = find_ci(s, "</" + name, i);
      if (end == std::string_view::npos) {
        result.diagnostics.push_back("unterminated <" + name + ">");
        end = s.size();
      }
      auto body = s.substr(i, end - i);
      builder.text(name == "script" || name == "style" ? std::string(body) : decode_entities(body));
      builder.end_tag(name);
      const std::size_t gt = s.find('>', end);
      i = gt == std::string_view::npos ? s.size() : gt + 1;
    }
  }
  flush_text();
  result.root = builder.finish();
  return result;
}

}  // namespace vxt::dom
