#include <regex>
#include <set>

#include "vxt/engine.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"
#include "vxt/xml.hpp"

namespace vxt::engine {

namespace {

const std::set<std::string, std::less<>> kSupported = {"vxml", "var",  "catch",  "script",    "form", "block",
                                                        "goto", "menu", "prompt", "enumerate", "choice"};

[[noreturn]] void unsupported(const dom::Node& at, const std::string& what) {
  throw Error(ErrorCode::unsupported, "E_UNSUPPORTED: line " + std::to_string(at.line) + ": " + what);
}

void check_tags(const dom::Node& n) {
  if (!n.is_element()) return;
  if (!kSupported.contains(n.name)) unsupported(n, "element <" + n.name + "> (\"" + n.name + "\")");
  for (const auto& c : n.children) check_tags(c);
}

std::string attr_or_empty(const dom::Node& n, std::string_view key) {
  const auto* v = n.attr(key);
  return v ? *v : std::string();
}

std::string strip_hash(std::string_view s) {
  if (!s.empty() && s.front() == '#') s.remove_prefix(1);
  return std::string(s);
}

const std::regex kPush(R"(^\s*([A-Za-z_$][\w$]*)\s*\.\s*push\s*\(\s*(["'])(.*)\2\s*\)\s*;?\s*$)");
const std::regex kPop(R"(^\s*([A-Za-z_$][\w$]*)\s*\.\s*pop\s*\(\s*\)\s*;?\s*$)");
const std::regex kNewArray(R"(^\s*new\s+Array\s*\(\s*\)\s*$)");
const std::regex kLiteral(R"(^\s*(["'])(.*)\1\s*$)");
const std::regex kPopOrDefault(
    R"(^\s*\(\s*([A-Za-z_$][\w$]*)\s*\.\s*pop\s*\(\s*\)\s*\)\s*\|\|\s*(?:application\s*\.\s*)?([A-Za-z_$][\w$]*)\s*$)");
const std::regex kIdentifier(R"(^\s*([A-Za-z_$][\w$]*)\s*$)");

class Loader {
 public:
  std::vector<Dialog> dialogs;
  std::string history;
  std::vector<Instruction> catch_ops;
  bool has_catch = false;
  std::map<std::string, std::string> globals;

  void top_var(const dom::Node& v) {
    const std::string name = attr_or_empty(v, "name");
    const std::string expr = attr_or_empty(v, "expr");
    std::smatch m;
    if (std::regex_match(expr, kNewArray)) {
      if (!history.empty()) unsupported(v, "a second history array \"" + name + "\"");
      history = name;
    } else if (std::regex_match(expr, m, kLiteral)) {
      globals[name] = m[2];
    } else {
      unsupported(v, "<var> expression \"" + expr + "\"");
    }
  }

  // Statements of a <block> or <catch>.
  std::vector<Instruction> statements(const dom::Node& parent) {
    std::vector<Instruction> ops;
    for (const auto& c : parent.children) {
      if (!c.is_element()) continue;
      if (c.name == "script") {
        const std::string code = xml::direct_text(c);
        std::smatch m;
        if (std::regex_match(code, m, kPush)) {
          history_ref(c, m[1]);
          ops.push_back({Instruction::push, m[3], {}});
        } else if (std::regex_match(code, m, kPop)) {
          history_ref(c, m[1]);
          ops.push_back({Instruction::pop, {}, {}});
        } else {
          unsupported(c, "script \"" + text::collapse_whitespace(code) + "\"");
        }
      } else if (c.name == "var") {
        const std::string name = attr_or_empty(c, "name");
        const std::string expr = attr_or_empty(c, "expr");
        std::smatch m;
        if (std::regex_match(expr, m, kPopOrDefault)) {
          history_ref(c, m[1]);
          ops.push_back({Instruction::pop_or_default, name, m[2]});
        } else if (std::regex_match(expr, m, kLiteral)) {
          ops.push_back({Instruction::assign, name, m[2]});
        } else {
          unsupported(c, "<var> expression \"" + expr + "\"");
        }
      } else if (c.name == "prompt") {
        ops.push_back({Instruction::say, text::collapse_whitespace(flat_text(c)), {}});
      } else if (c.name == "goto") {
        if (const auto* next = c.attr("next")) {
          ops.push_back({Instruction::go, target(c, *next), {}});
        } else if (const auto* expr = c.attr("expr")) {
          std::smatch m;
          const std::string e = *expr;
          if (std::regex_match(e, m, kLiteral)) ops.push_back({Instruction::go, target(c, m[2].str()), {}});
          else if (std::regex_match(e, m, kIdentifier)) ops.push_back({Instruction::go_var, m[1], {}});
          else unsupported(c, "<goto> expression \"" + e + "\"");
        } else {
          unsupported(c, "<goto> without next or expr");
        }
      } else {
        unsupported(c, "<" + c.name + "> inside <" + parent.name + ">");
      }
    }
    return ops;
  }

  void form(const dom::Node& f) {
    Dialog d;
    d.id = attr_or_empty(f, "id");
    for (const auto& c : f.children) {
      if (!c.is_element()) continue;
      if (c.name != "block") unsupported(c, "<" + c.name + "> inside <form>");
      auto ops = statements(c);
      d.ops.insert(d.ops.end(), ops.begin(), ops.end());
    }
    dialogs.push_back(std::move(d));
  }

  void menu(const dom::Node& n) {
    Dialog d;
    d.id = attr_or_empty(n, "id");
    d.is_menu = true;
    for (const auto& c : n.children) {
      if (!c.is_element()) continue;
      if (c.name == "prompt") {
        for (const auto& p : c.children) {
          if (p.is_element()) {
            if (p.name != "enumerate") unsupported(p, "<" + p.name + "> inside <prompt>");
            d.prompt.push_back({true, {}});
          } else {
            d.prompt.push_back({false, p.text});
          }
        }
      } else if (c.name == "choice") {
        MenuChoice choice;
        choice.label = text::collapse_whitespace(xml::direct_text(c));
        if (const auto* next = c.attr("next")) {
          choice.target = target(c, *next);
        } else if (const auto* event = c.attr("event")) {
          if (*event == "exit") choice.action = MenuChoice::exit;
          else if (*event == vxml::kBackEvent) choice.action = MenuChoice::back;
          else unsupported(c, "choice event \"" + *event + "\"");
        } else {
          unsupported(c, "<choice> without next or event");
        }
        if (const auto* tokens = c.attr("tokens")) {
          std::string_view rest = *tokens;
          while (true) {
            const auto bar = rest.find('|');
            auto t = text::normalize_utterance(rest.substr(0, bar));
            if (!t.empty()) choice.tokens.push_back(std::move(t));
            if (bar == std::string_view::npos) break;
            rest.remove_prefix(bar + 1);
          }
        } else {
          choice.tokens.push_back(text::normalize_utterance(choice.label));
        }
        d.choices.push_back(std::move(choice));
      } else {
        unsupported(c, "<" + c.name + "> inside <menu>");
      }
    }
    dialogs.push_back(std::move(d));
  }

 private:
  void history_ref(const dom::Node& at, const std::string& name) {
    if (name != history) unsupported(at, "\"" + name + "\" is not the declared history array");
  }

  static std::string target(const dom::Node& at, std::string_view ref) {
    if (ref.empty() || ref.front() != '#') {
      throw Error(ErrorCode::target, "E_TARGET: line " + std::to_string(at.line) + ": \"" + std::string(ref) +
                                         "\" is not a dialog reference");
    }
    return strip_hash(ref);
  }

  static std::string flat_text(const dom::Node& n) {
    std::string out;
    for (const auto& c : n.children) {
      if (c.is_element()) out += flat_text(c);
      else out += c.text;
    }
    return out;
  }
};

[[noreturn]] void bad_target(const std::string& from, const std::string& target) {
  throw Error(ErrorCode::target, "E_TARGET: dialog \"" + from + "\" refers to \"#" + target + "\" which does not exist");
}

}  // namespace

const Dialog* Machine::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &dialogs_[it->second];
}

const Dialog& Machine::at(std::string_view id) const {
  const auto* d = find(id);
  if (d == nullptr) throw Error(ErrorCode::target, "E_TARGET: no dialog \"" + std::string(id) + "\"");
  return *d;
}

std::string Machine::display(std::string_view literal) const {
  if (auto it = to_display_.find(literal); it != to_display_.end()) return it->second;
  std::string s = strip_hash(literal);
  if (s.starts_with(vxml::kEntryPrefix)) s.erase(0, vxml::kEntryPrefix.size());
  return s;
}

std::string Machine::literal(std::string_view display) const {
  if (auto it = to_literal_.find(display); it != to_literal_.end()) return it->second;
  if (find(std::string(vxml::kEntryPrefix) + std::string(display))) {
    return "#" + std::string(vxml::kEntryPrefix) + std::string(display);
  }
  return "#" + std::string(display);
}

Machine load_machine(std::string_view voicexml) {
  const dom::Node root = xml::parse(voicexml);
  check_tags(root);
  if (root.name != "vxml") unsupported(root, "document element <" + root.name + ">");

  Loader loader;
  for (const auto& c : root.children) {
    if (c.is_element() && c.name == "var") loader.top_var(c);
  }
  for (const auto& c : root.children) {
    if (!c.is_element()) continue;
    if (c.name == "var") continue;
    if (c.name == "catch") {
      const std::string event = attr_or_empty(c, "event");
      if (event != vxml::kBackEvent) unsupported(c, "catch event \"" + event + "\"");
      if (loader.has_catch) unsupported(c, "a second ongoback catch");
      loader.has_catch = true;
      loader.catch_ops = loader.statements(c);
    } else if (c.name == "form") {
      loader.form(c);
    } else if (c.name == "menu") {
      loader.menu(c);
    } else {
      unsupported(c, "<" + c.name + "> at document level");
    }
  }

  Machine m;
  m.dialogs_ = std::move(loader.dialogs);
  m.history_ = std::move(loader.history);
  m.catch_ = std::move(loader.catch_ops);
  m.has_catch_ = loader.has_catch;
  m.globals_ = std::move(loader.globals);
  if (m.dialogs_.empty()) throw Error(ErrorCode::target, "E_TARGET: document defines no dialogs");
  for (std::size_t i = 0; i < m.dialogs_.size(); ++i) {
    if (m.dialogs_[i].id.empty()) throw Error(ErrorCode::parse, "dialog without an id");
    if (!m.index_.emplace(m.dialogs_[i].id, i).second) {
      throw Error(ErrorCode::parse, "duplicate dialog id \"" + m.dialogs_[i].id + "\"");
    }
  }
  m.start_ = m.dialogs_.front().id;

  auto check_ops = [&](const std::string& from, const std::vector<Instruction>& ops) {
    for (const auto& op : ops) {
      if (op.kind == Instruction::go && !m.find(op.a)) bad_target(from, op.a);
      if (op.kind == Instruction::push && !m.find(strip_hash(op.a))) bad_target(from, strip_hash(op.a));
      if (op.kind == Instruction::pop_or_default) {
        auto g = m.globals_.find(op.b);
        if (g == m.globals_.end()) {
          throw Error(ErrorCode::target, "E_TARGET: default variable \"" + op.b + "\" is not declared");
        }
        if (!m.find(strip_hash(g->second))) bad_target(op.b, strip_hash(g->second));
      }
    }
  };
  check_ops("catch", m.catch_);
  std::set<std::string> literals;
  for (const auto& d : m.dialogs_) {
    check_ops(d.id, d.ops);
    for (const auto& c : d.choices) {
      if (c.action == MenuChoice::go && !m.find(c.target)) bad_target(d.id, c.target);
    }
    for (const auto& op : d.ops) {
      if (op.kind == Instruction::push) literals.insert(op.a);
    }
  }

  // Entry-form pushes display without their prefix; anything else that
  // would collide with one of them keeps its full literal.
  std::map<std::string, std::vector<std::string>> by_display;
  for (const auto& lit : literals) by_display[m.display(lit)].push_back(lit);
  for (const auto& [shown, lits] : by_display) {
    for (const auto& lit : lits) {
      const bool entry = strip_hash(lit).starts_with(vxml::kEntryPrefix);
      const std::string d = (lits.size() == 1 || entry) ? shown : lit;
      m.to_display_[lit] = d;
      m.to_literal_[d] = lit;
    }
  }
  return m;
}

Machine load_machine(const vxml::Document& doc) { return load_machine(vxml::emit_voicexml(doc)); }

}  // namespace vxt::engine
