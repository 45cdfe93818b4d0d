#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vxt/vxpl.hpp"

namespace vxt::testing {

// Tracks the caller's position as a root-to-current path of VXPL ids,
// computing each node's vocabulary straight from the tree. Shares nothing
// with the transcoder or the interpreter beyond the VXPL types.
class PathOracle {
 public:
  enum class Move {
    child,     // into a child menu
    record,    // into a record
    promoted,  // root-level shortcut to a deeper menu
    leaf,      // headline, text, read-all or field readout: position unchanged
    sibling,   // next/previous record
    end,       // next/previous past either end: position unchanged
    back,
    none,      // not understood
  };

  explicit PathOracle(const vxpl::MenuTree& tree);

  const std::vector<std::string>& path() const { return path_; }
  // Dialog the caller should be in: "m-<id>" for menus, "r-<id>" for records.
  std::string dialog() const;
  // Every utterance understood here, including "back".
  std::vector<std::string> vocabulary() const;

  Move classify(std::string_view utterance) const;
  Move apply(std::string_view utterance);

 private:
  struct Entry {
    std::string token;
    Move move;
    std::string target;  // id entered for child/record/promoted/sibling
  };
  std::vector<Entry> entries() const;
  std::size_t current() const;

  const vxpl::MenuTree* tree_;
  std::vector<std::string> path_;
};

}  // namespace vxt::testing
