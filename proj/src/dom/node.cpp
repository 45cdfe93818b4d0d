#include <charconv>

#include "vxt/dom.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"

namespace vxt::dom {

const std::string* Node::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool operator==(const Node& a, const Node& b) {
  return a.kind == b.kind && a.name == b.name && a.attributes == b.attributes && a.text == b.text &&
         a.children == b.children;
}

std::vector<const Node*> element_children(const Node& node) {
  std::vector<const Node*> out;
  for (const auto& c : node.children) {
    if (c.is_element()) out.push_back(&c);
  }
  return out;
}

// --- NodePath -------------------------------------------------------------

NodePath::NodePath(std::vector<Step> steps, bool absolute)
    : steps_(std::move(steps)), absolute_(absolute) {
  for (const auto& s : steps_) {
    if (s.index < 1 || s.name.empty()) throw Error(ErrorCode::usage, "invalid path step");
  }
}

namespace {

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '_' || c == ':' || c == '.';
}

[[noreturn]] void bad_path(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::parse, "bad path \"" + std::string(text) + "\": " + std::string(why));
}

}  // namespace

NodePath NodePath::parse(std::string_view text) {
  if (text == ".") return NodePath({}, false);
  if (text.empty()) bad_path(text, "empty");

  const bool absolute = text.front() == '/';
  std::size_t pos = absolute ? 1 : 0;
  std::vector<Step> steps;
  while (true) {
    const std::size_t start = pos;
    while (pos < text.size() && is_name_char(text[pos])) ++pos;
    if (pos == start) bad_path(text, "expected element name");
    Step step{std::string(text.substr(start, pos - start)), 1};
    if (step.name == "." || step.name == "..") bad_path(text, "axes are not supported");
    if (pos < text.size() && text[pos] == '[') {
      const std::size_t close = text.find(']', pos);
      if (close == std::string_view::npos) bad_path(text, "unterminated predicate");
      const auto digits = text.substr(pos + 1, close - pos - 1);
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
        bad_path(text, "predicate must be a positive integer");
      }
      if (value < 1) bad_path(text, "ordinals are 1-based");
      step.index = value;
      pos = close + 1;
    }
    steps.push_back(std::move(step));
    if (pos == text.size()) break;
    if (text[pos] != '/') bad_path(text, "unexpected character");
    ++pos;
  }
  return NodePath(std::move(steps), absolute);
}

std::string NodePath::str() const {
  if (steps_.empty()) return absolute_ ? "/" : ".";
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (absolute_ || i > 0) out.push_back('/');
    out += steps_[i].name;
    if (steps_[i].index != 1) out += "[" + std::to_string(steps_[i].index) + "]";
  }
  return out;
}

// --- resolution -----------------------------------------------------------

namespace {

const Node* child_step(const Node& parent, const NodePath::Step& step) {
  std::size_t seen = 0;
  for (const auto& c : parent.children) {
    if (c.is_element(step.name) && ++seen == step.index) return &c;
  }
  return nullptr;
}

bool find_path(const Node& current, const Node& target, std::vector<NodePath::Step>& steps) {
  if (&current == &target) return true;
  std::vector<std::pair<std::string_view, std::size_t>> counts;
  for (const auto& c : current.children) {
    if (!c.is_element()) {
      if (&c == &target) return false;  // text/comment nodes are not addressable
      continue;
    }
    std::size_t ordinal = 1;
    bool found = false;
    for (auto& [name, n] : counts) {
      if (name == c.name) {
        ordinal = ++n;
        found = true;
        break;
      }
    }
    if (!found) counts.emplace_back(c.name, 1);
    steps.push_back({c.name, ordinal});
    if (find_path(c, target, steps)) return true;
    steps.pop_back();
  }
  return false;
}

void collect_text(const Node& node, std::string& out) {
  if (node.kind == Node::Kind::text) {
    out += node.text;
    return;
  }
  if (node.kind == Node::Kind::comment) return;
  for (const auto& c : node.children) collect_text(c, out);
}

void collect_anchors(const Node& node, std::vector<const Node*>& out) {
  if (node.is_element("a") && node.attr("href") != nullptr) {
    out.push_back(&node);
    return;  // nested anchors are invalid HTML; the outer one wins
  }
  for (const auto& c : node.children) collect_anchors(c, out);
}

}  // namespace

const Node* resolve_relative(const Node& context, const NodePath& path) {
  const Node* cur = &context;
  for (const auto& step : path.steps()) {
    cur = child_step(*cur, step);
    if (cur == nullptr) return nullptr;
  }
  return cur;
}

const Node* resolve_path(const Node& root, const NodePath& path) {
  if (!path.absolute()) return resolve_relative(root, path);
  const auto& steps = path.steps();
  if (steps.empty() || steps.front().index != 1 || !root.is_element(steps.front().name)) {
    return nullptr;
  }
  const Node* cur = &root;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    cur = child_step(*cur, steps[i]);
    if (cur == nullptr) return nullptr;
  }
  return cur;
}

NodePath path_of(const Node& root, const Node& node) {
  std::vector<NodePath::Step> steps;
  if (!root.is_element()) throw Error(ErrorCode::usage, "path_of: root is not an element");
  steps.push_back({root.name, 1});
  if (!find_path(root, node, steps)) {
    throw Error(ErrorCode::usage, "path_of: node is not an element of this tree");
  }
  return NodePath(std::move(steps), true);
}

std::string inner_text(const Node& node) {
  std::string raw;
  collect_text(node, raw);
  return text::collapse_whitespace(raw);
}

std::optional<Link> extract_link(const Node& node) {
  std::vector<const Node*> anchors;
  collect_anchors(node, anchors);
  if (anchors.empty()) return std::nullopt;
  if (anchors.size() > 1) {
    throw Error(ErrorCode::ambiguous, std::to_string(anchors.size()) +
                                          " anchors found where exactly one was expected (first href \"" +
                                          *anchors[0]->attr("href") + "\")");
  }
  return Link{*anchors[0]->attr("href"), inner_text(*anchors[0])};
}

}  // namespace vxt::dom
