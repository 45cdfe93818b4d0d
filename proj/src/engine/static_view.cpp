#include <deque>

#include "vxt/engine.hpp"

namespace vxt::engine {

namespace {

struct Chain {
  std::optional<std::string> pushed;  // first literal pushed on the way
  bool spoke = false;
  std::optional<std::string> menu;  // menu reached, if any
};

// Follow static gotos from a form until a menu, a back sequence or a dead end.
Chain follow(const Machine& m, const std::string& from) {
  Chain chain;
  std::set<std::string> seen;
  std::string id = from;
  while (seen.insert(id).second) {
    const Dialog& d = m.at(id);
    if (d.is_menu) {
      chain.menu = d.id;
      return chain;
    }
    std::optional<std::string> next;
    for (const auto& op : d.ops) {
      if (op.kind == Instruction::push && !chain.pushed) chain.pushed = op.a;
      if (op.kind == Instruction::say) chain.spoke = true;
      if (op.kind == Instruction::go) {
        next = op.a;
        break;
      }
      if (op.kind == Instruction::go_var) break;
    }
    if (!next) return chain;
    id = *next;
  }
  return chain;
}

void expand(const Machine& m, StaticNode& node, const std::string& menu_id, std::set<std::string>& listed) {
  for (const auto& c : m.at(menu_id).choices) {
    if (c.action != MenuChoice::go) continue;
    const Chain chain = follow(m, c.target);
    StaticNode child;
    child.label = c.label;
    if (!chain.menu) {
      child.kind = StaticNode::leaf;
      child.id = c.target;
      node.children.push_back(std::move(child));
      continue;
    }
    child.kind = chain.spoke ? StaticNode::record : StaticNode::menu;
    child.id = chain.pushed ? m.display(*chain.pushed) : *chain.menu;
    if (!listed.insert(child.id).second) {
      child.repeated = true;
    } else if (child.kind == StaticNode::menu) {
      expand(m, child, *chain.menu, listed);
    }
    node.children.push_back(std::move(child));
  }
}

}  // namespace

StaticNode static_tree(const Machine& machine) {
  StaticNode root;
  const Chain chain = follow(machine, machine.start_id());
  root.id = chain.pushed ? machine.display(*chain.pushed) : chain.menu.value_or(machine.start_id());
  if (!chain.menu) {
    root.kind = StaticNode::leaf;
    return root;
  }
  std::set<std::string> listed{root.id};
  expand(machine, root, *chain.menu, listed);
  return root;
}

std::set<std::string> statically_reachable(const Machine& machine) {
  std::set<std::string> seen{machine.start_id()};
  std::deque<std::string> queue{machine.start_id()};
  auto visit = [&](const std::string& id) {
    if (machine.find(id) && seen.insert(id).second) queue.push_back(id);
  };
  while (!queue.empty()) {
    const Dialog& d = machine.at(queue.front());
    queue.pop_front();
    for (const auto& op : d.ops) {
      if (op.kind == Instruction::go) visit(op.a);
      if (op.kind == Instruction::push) visit(op.a.starts_with('#') ? op.a.substr(1) : op.a);
    }
    for (const auto& c : d.choices) {
      if (c.action == MenuChoice::go) visit(c.target);
    }
  }
  return seen;
}

}  // namespace vxt::engine
