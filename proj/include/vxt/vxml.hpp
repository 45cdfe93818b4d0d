#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vxt/vxpl.hpp"

namespace vxt::vxml {

// Dialog naming contract (consumed by the interpreter and golden tests):
//   f-<id>        entry form of a menu or record: pushes "#f-<id>", then
//                 continues to the dialog below
//   m-<id>        menu dialog of VXPL menu <id>
//   r-<id>        command menu of VXPL record <id>
//   j-<id>-<k>    readout of record <id> from its k-th named field
//   r-<id>-next / r-<id>-previous
//                 move within a record list: pop the current record and
//                 enter the neighbour, or say so at either end
//   i-<menu>-<n>  n-th headline item of <menu>
//   t-<menu>-<n>  n-th text block of <menu>
//   a-<menu>      read-all of the records under <menu>
inline constexpr std::string_view kEntryPrefix = "f-";
inline constexpr std::string_view kMenuPrefix = "m-";
inline constexpr std::string_view kRecordPrefix = "r-";

inline constexpr std::string_view kHistoryVar = "aNavHistory";
inline constexpr std::string_view kDefaultVar = "sDefaultURL";
inline constexpr std::string_view kJumpVar = "sJumpTo";
inline constexpr std::string_view kBackEvent = "ongoback";
inline constexpr std::string_view kMenuLeadIn = "Please say one of the followings:";
inline constexpr std::string_view kRecordLeadIn = "You can say:";
inline constexpr std::string_view kNoMoreItems = "No more items.";
inline constexpr std::string_view kFirstItem = "This is the first item.";

struct Goto {
  std::string target;  // dialog id, no leading '#'
  bool operator==(const Goto&) const = default;
};
struct RaiseBack {
  bool operator==(const RaiseBack&) const = default;
};
struct Exit {
  bool operator==(const Exit&) const = default;
};
using Action = std::variant<Goto, RaiseBack, Exit>;

struct Choice {
  std::string label;                // spoken by <enumerate/>
  std::vector<std::string> tokens;  // normalized utterances accepted
  Action action;
  bool operator==(const Choice&) const = default;
};

struct Prologue {
  std::string history_var{kHistoryVar};
  std::string default_target;  // entry form of the root menu
  bool operator==(const Prologue&) const = default;
};

/// Push `push`, optionally speak `say`, continue at `next`.
struct EntryForm {
  std::string id;
  std::string push;
  std::optional<std::string> say;
  std::string next;
  bool operator==(const EntryForm&) const = default;
};

struct MenuDialog {
  std::string id;
  std::string prompt;  // spoken before the enumeration
  std::vector<Choice> choices;
  bool operator==(const MenuDialog&) const = default;
};

/// Readout plan of one record.
struct RecordPlan {
  std::string record_id;
  std::vector<std::string> keys;
  std::vector<std::pair<std::string, std::string>> fields;  // named fields, document order
  std::string readout;
  std::vector<std::string> tokens;  // selection tokens from key values
  std::optional<std::string> next;  // neighbouring record ids in the list
  std::optional<std::string> previous;
  bool operator==(const RecordPlan&) const = default;
};

/// Expands to f-<id>, r-<id>, j-<id>-<k>, r-<id>-next and r-<id>-previous.
struct RecordForm {
  RecordPlan plan;
  bool operator==(const RecordForm&) const = default;
};

/// A leaf outcome: pushes itself, speaks, then runs the back sequence so the
/// caller returns to the menu the leaf was chosen from.
struct LeafForm {
  std::string id;
  std::string say;
  bool operator==(const LeafForm&) const = default;
};

using Dialog = std::variant<EntryForm, MenuDialog, RecordForm, LeafForm>;

struct Document {
  Prologue prologue;
  std::vector<Dialog> dialogs;
  bool operator==(const Document&) const = default;
};

struct TranscodeOptions {
  bool numbering = true;
};

/// Non-root menus with promote=true, document order (root-only promotion).
std::vector<std::string> collect_promotions(const vxpl::MenuTree& tree);

struct GroupPlan {
  std::vector<RecordPlan> records;
  std::vector<std::string> diagnostics;
};

/// Readout and navigation plan for the records (Structured nodes) under one
/// parent, in document order.
GroupPlan plan_structured(const vxpl::MenuTree& tree, std::span<const std::size_t> records);

/// Compile a validated tree into the VoiceXML dialog model. Throws
/// Error(validation) when two choices of one menu accept the same token.
Document transcode(const vxpl::MenuTree& tree, const TranscodeOptions& options = {});

/// Every dialog id the document defines, after expanding record forms.
std::vector<std::string> dialog_ids(const Document& doc);

/// Target closure and id uniqueness; returns problems (empty when valid).
std::vector<std::string> validate(const Document& doc);

/// Deterministic VoiceXML 2.0 text restricted to vxml, var, catch, script,
/// form, block, goto, menu, prompt, enumerate and choice.
std::string emit_voicexml(const Document& doc);

}  // namespace vxt::vxml
