#include <deque>
#include <optional>

#include "vxt/engine.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"

namespace vxt::engine {

namespace {

// Guards against forms that jump between each other without reaching a menu.
constexpr std::size_t kMaxHops = 100000;

std::string render_menu(const Dialog& d) {
  std::string out;
  for (const auto& part : d.prompt) {
    if (!part.enumerate) {
      out += part.text;
      continue;
    }
    std::string list;
    for (const auto& c : d.choices) list += (list.empty() ? "" : ", ") + c.label;
    out += list;
  }
  return text::collapse_whitespace(out);
}

std::string strip_hash(std::string_view s) {
  if (!s.empty() && s.front() == '#') s.remove_prefix(1);
  return std::string(s);
}

// One transition: executes forms until a menu is reached or a form ends
// without a goto (which ends the dialog).
class Runtime {
 public:
  Runtime(const Machine& m, const std::vector<std::string>& stack) : m_(m) {
    for (const auto& s : stack) stack_.push_back(m.literal(s));
  }

  std::optional<std::string> run_from(std::string target) {
    for (std::size_t hops = 0; hops < kMaxHops; ++hops) {
      const Dialog& d = m_.at(target);
      visited.push_back(d.id);
      if (d.is_menu) {
        spoken_.push_back(render_menu(d));
        return d.id;
      }
      auto next = exec(d.ops);
      if (!next) return std::nullopt;
      target = std::move(*next);
    }
    throw Error(ErrorCode::target, "E_TARGET: no menu reached after " + std::to_string(kMaxHops) + " jumps");
  }

  std::optional<std::string> back() {
    auto next = exec(m_.back_handler());
    if (!next) return std::nullopt;
    return run_from(*next);
  }

  std::vector<std::string> stack() const {
    std::vector<std::string> out;
    for (const auto& s : stack_) out.push_back(m_.display(s));
    return out;
  }

  std::string spoken() const {
    std::string out;
    for (const auto& s : spoken_) {
      if (s.empty()) continue;
      out += (out.empty() ? "" : " ") + s;
    }
    return out;
  }

  std::vector<std::string> visited;

 private:
  std::optional<std::string> exec(const std::vector<Instruction>& ops) {
    for (const auto& op : ops) {
      switch (op.kind) {
        case Instruction::push:
          stack_.push_back(op.a);
          break;
        case Instruction::pop:
          if (!stack_.empty()) stack_.pop_back();
          break;
        case Instruction::assign:
          vars_[op.a] = op.b;
          break;
        case Instruction::pop_or_default: {
          std::string v;
          if (!stack_.empty()) {
            v = stack_.back();
            stack_.pop_back();
          }
          if (v.empty()) v = lookup(op.b);
          vars_[op.a] = v;
          break;
        }
        case Instruction::say:
          spoken_.push_back(op.a);
          break;
        case Instruction::go:
          return op.a;
        case Instruction::go_var:
          return strip_hash(lookup(op.a));
      }
    }
    return std::nullopt;
  }

  std::string lookup(const std::string& name) const {
    if (auto it = vars_.find(name); it != vars_.end()) return it->second;
    if (auto it = m_.globals().find(name); it != m_.globals().end()) return it->second;
    throw Error(ErrorCode::target, "E_TARGET: variable \"" + name + "\" is undefined");
  }

  const Machine& m_;
  std::vector<std::string> stack_;
  std::vector<std::string> spoken_;
  std::map<std::string, std::string> vars_;
};

DialogState finish(const DialogState& from, Runtime& rt, const std::optional<std::string>& reached) {
  DialogState s = from;
  s.nav_stack = rt.stack();
  s.last_prompt = rt.spoken();
  if (reached) s.current = *reached;
  else s.phase = Phase::terminated;
  return s;
}

}  // namespace

StartResult start(const Machine& machine) {
  Runtime rt(machine, {});
  const auto reached = rt.run_from(machine.start_id());
  StartResult r;
  r.state = finish(DialogState{}, rt, reached);
  r.prompt = r.state.last_prompt;
  r.visited = std::move(rt.visited);
  if (!reached) {
    r.diagnostics.push_back("the start dialog ends without reaching a menu");
  } else if (machine.at(*reached).choices.empty()) {
    r.diagnostics.push_back("menu \"" + *reached + "\" offers no choices");
  }
  return r;
}

StepResult step(const Machine& machine, const DialogState& state, std::string_view utterance) {
  if (state.phase == Phase::terminated) throw Error(ErrorCode::usage, "the dialog has already terminated");
  const std::string u = text::normalize_utterance(utterance);
  const Dialog& here = machine.at(state.current);

  const MenuChoice* chosen = nullptr;
  for (const auto& c : here.choices) {
    for (const auto& t : c.tokens) {
      if (t == u) chosen = &c;
    }
    if (chosen) break;
  }
  enum { none, go, back, exit } action = none;
  if (chosen) {
    action = chosen->action == MenuChoice::go ? go : chosen->action == MenuChoice::back ? back : exit;
  } else if (u == "back" && machine.has_back_handler()) {
    action = back;
  } else if (u == "exit" || u == "goodbye") {
    action = exit;
  }

  StepResult r;
  if (action == none) {
    r.state = state;
    r.outcome = {Outcome::no_match, std::string(kNoMatchPrefix) + state.last_prompt};
    return r;
  }
  if (action == exit) {
    r.state = state;
    r.state.phase = Phase::terminated;
    r.state.last_prompt = std::string(kGoodbye);
    r.outcome = {Outcome::terminated, std::string(kGoodbye)};
    return r;
  }
  Runtime rt(machine, state.nav_stack);
  const auto reached = action == go ? rt.run_from(chosen->target) : rt.back();
  r.state = finish(state, rt, reached);
  r.visited = std::move(rt.visited);
  r.outcome = {reached ? Outcome::prompt : Outcome::terminated, r.state.last_prompt};
  return r;
}

std::vector<ChoiceView> offered_choices(const Machine& machine, const DialogState& state) {
  std::vector<ChoiceView> out;
  if (state.phase == Phase::terminated) return out;
  for (const auto& c : machine.at(state.current).choices) out.push_back({c.label, c.tokens});
  return out;
}

std::vector<TranscriptEntry> run_script(const Machine& machine, const std::vector<std::string>& utterances) {
  std::vector<TranscriptEntry> out;
  auto s = start(machine);
  out.push_back({"(start)",
                 {s.state.phase == Phase::terminated ? Outcome::terminated : Outcome::prompt, s.prompt},
                 s.state});
  for (const auto& u : utterances) {
    if (out.back().state.phase == Phase::terminated) break;
    auto r = step(machine, out.back().state, u);
    out.push_back({u, std::move(r.outcome), std::move(r.state)});
  }
  return out;
}

std::vector<std::string> parse_script(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line = text::collapse_whitespace(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') out.push_back(std::move(line));
    pos = end + 1;
  }
  return out;
}

std::string format_transcript(const std::vector<TranscriptEntry>& transcript) {
  std::string out;
  for (const auto& e : transcript) {
    out += "YOU: " + e.utterance + "\n";
    out += "SYS: " + e.outcome.text + "\n";
    std::string stack;
    for (const auto& s : e.state.nav_stack) stack += (stack.empty() ? "" : ",") + s;
    out += "STACK: " + stack + "\n";
  }
  return out;
}

}  // namespace vxt::engine
