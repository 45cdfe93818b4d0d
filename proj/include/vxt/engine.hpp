#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vxt/vxml.hpp"

namespace vxt::engine {

// Executable model of the supported VoiceXML subset.

struct Instruction {
  enum Kind {
    push,            // history.push(literal)
    pop,             // history.pop()
    assign,          // var = literal
    pop_or_default,  // var = (history.pop()) || default
    say,             // <prompt> text
    go,              // <goto next="#id">
    go_var,          // <goto expr="var">
  } kind;
  std::string a;  // literal / variable / text / target
  std::string b;  // literal for assign, default variable for pop_or_default
};

struct PromptPart {
  bool enumerate = false;
  std::string text;
};

struct MenuChoice {
  enum Action { go, back, exit } action = go;
  std::string label;
  std::vector<std::string> tokens;  // normalized; label when no tokens attribute
  std::string target;               // for go
};

struct Dialog {
  std::string id;
  bool is_menu = false;
  std::vector<Instruction> ops;  // forms
  std::vector<PromptPart> prompt;  // menus
  std::vector<MenuChoice> choices;
};

class Machine {
 public:
  const Dialog* find(std::string_view id) const;
  const Dialog& at(std::string_view id) const;
  const std::vector<Dialog>& dialogs() const { return dialogs_; }
  const std::string& start_id() const { return start_; }
  const std::string& history_var() const { return history_; }
  const std::vector<Instruction>& back_handler() const { return catch_; }
  bool has_back_handler() const { return has_catch_; }
  const std::map<std::string, std::string>& globals() const { return globals_; }

  // Stack entries are shown without '#' and without the entry-form prefix,
  // so "#f-top" is displayed as "top".
  std::string display(std::string_view literal) const;
  std::string literal(std::string_view display) const;

 private:
  friend Machine load_machine(std::string_view voicexml);
  std::vector<Dialog> dialogs_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::string start_;
  std::string history_;
  std::vector<Instruction> catch_;
  bool has_catch_ = false;
  std::map<std::string, std::string> globals_;  // document-level <var> literals
  std::map<std::string, std::string, std::less<>> to_display_;
  std::map<std::string, std::string, std::less<>> to_literal_;
};

/// Build a machine from VoiceXML text. Throws Error(parse) for malformed XML,
/// Error(unsupported) naming any tag, attribute form or script outside the
/// interpreted subset, and Error(target) for an unresolved goto or choice.
Machine load_machine(std::string_view voicexml);
Machine load_machine(const vxml::Document& doc);

enum class Phase { awaiting_input, terminated };

struct DialogState {
  std::string current;                 // menu dialog awaiting input
  std::vector<std::string> nav_stack;  // display form, bottom first
  Phase phase = Phase::awaiting_input;
  std::string last_prompt;
  bool operator==(const DialogState&) const = default;
};

struct Outcome {
  enum Kind { prompt, no_match, terminated } kind = prompt;
  std::string text;
};

struct StartResult {
  DialogState state;
  std::string prompt;
  std::vector<std::string> diagnostics;
  std::vector<std::string> visited;  // dialogs executed, in order
};

struct StepResult {
  DialogState state;
  Outcome outcome;
  std::vector<std::string> visited;
};

inline constexpr std::string_view kNoMatchPrefix = "I did not understand. ";
inline constexpr std::string_view kGoodbye = "Goodbye.";

StartResult start(const Machine& machine);

/// One user turn. Matching is exact on the normalized utterance; "back",
/// "exit" and "goodbye" are understood everywhere. Throws Error(usage) on a
/// terminated state.
StepResult step(const Machine& machine, const DialogState& state, std::string_view utterance);

struct ChoiceView {
  std::string label;
  std::vector<std::string> tokens;
  bool operator==(const ChoiceView&) const = default;
};

/// Choices offered by the state's current menu (empty once terminated).
std::vector<ChoiceView> offered_choices(const Machine& machine, const DialogState& state);

struct TranscriptEntry {
  std::string utterance;  // "(start)" for the opening entry
  Outcome outcome;
  DialogState state;
};

/// Start, then step through the utterances; stops after termination.
std::vector<TranscriptEntry> run_script(const Machine& machine, const std::vector<std::string>& utterances);

/// Script file: one utterance per line; blank lines and '#' comments skipped.
std::vector<std::string> parse_script(std::string_view text);

/// "YOU: ..." / "SYS: ..." / "STACK: a,b" per entry.
std::string format_transcript(const std::vector<TranscriptEntry>& transcript);

// --- static view ------------------------------------------------------------

struct StaticNode {
  enum Kind { menu, record, leaf } kind = menu;
  std::string id;     // stack display id for menus/records, dialog id for leaves
  std::string label;  // choice label leading here ("" for the root)
  bool repeated = false;  // already listed earlier (promotion); not expanded
  std::vector<StaticNode> children;
};

/// Menu structure recovered by following choices from the start dialog
/// without executing anything. Back choices are skipped.
StaticNode static_tree(const Machine& machine);

/// Dialog ids reachable from the start dialog through static targets.
std::set<std::string> statically_reachable(const Machine& machine);

}  // namespace vxt::engine
