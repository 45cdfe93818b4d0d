#include <algorithm>
#include <map>
#include <set>

#include "lower.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"

namespace vxt::vxml {

namespace {

using vxpl::MenuTree;

bool usable_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' || c == ':';
  });
}

void add_token(std::vector<std::string>& tokens, std::string token) {
  if (!token.empty() && std::find(tokens.begin(), tokens.end(), token) == tokens.end()) {
    tokens.push_back(std::move(token));
  }
}

// Grammar tokens of one menu; any token accepted by two choices is an error.
class TokenTable {
 public:
  explicit TokenTable(std::string menu) : menu_(std::move(menu)) {
    for (const char* r : {"back", "exit", "goodbye"}) owner_.emplace(r, std::string("the reserved command \"") + r + "\"");
  }

  void claim(const Choice& c) {
    for (const auto& t : c.tokens) {
      auto [it, inserted] = owner_.emplace(t, "\"" + c.label + "\"");
      if (!inserted) {
        throw Error(ErrorCode::validation, "menu \"" + menu_ + "\": choice \"" + c.label + "\" and " + it->second +
                                               " both accept \"" + t + "\"");
      }
    }
  }

 private:
  std::string menu_;
  std::map<std::string, std::string> owner_;
};

class Transcoder {
 public:
  Transcoder(const MenuTree& tree, const TranscodeOptions& options) : tree_(tree), options_(options) {}

  Document run() {
    for (const auto& e : tree_.document().elements) {
      const auto id = vxpl::element_id(e);
      if (!id.empty() && !usable_id(id)) {
        throw Error(ErrorCode::validation, "id \"" + std::string(id) +
                                               "\" cannot name a dialog (letters, digits, '-', '_', '.', ':' only)");
      }
    }
    const auto& root = std::get<vxpl::Menu>(tree_.element(tree_.root_index()));
    doc_.prologue.default_target = std::string(kEntryPrefix) + root.id;
    for (const auto& id : collect_promotions(tree_)) {
      const auto i = *tree_.find(id);
      if (*tree_.node(i).parent != tree_.root_index()) promoted_.push_back(i);
    }
    menu(tree_.root_index());
    return std::move(doc_);
  }

 private:
  std::string menu_label(std::size_t i) const {
    const auto& m = std::get<vxpl::Menu>(tree_.element(i));
    return m.prompt.empty() ? m.id : m.prompt;
  }

  Choice menu_choice(std::size_t i) const {
    const auto& m = std::get<vxpl::Menu>(tree_.element(i));
    Choice c{menu_label(i), {}, Goto{std::string(kEntryPrefix) + m.id}};
    add_token(c.tokens, text::normalize_utterance(c.label));
    return c;
  }

  void menu(std::size_t i) {
    const auto& m = std::get<vxpl::Menu>(tree_.element(i));
    const bool is_root = i == tree_.root_index();
    doc_.dialogs.emplace_back(
        EntryForm{std::string(kEntryPrefix) + m.id, std::string(kEntryPrefix) + m.id, std::nullopt,
                  std::string(kMenuPrefix) + m.id});
    const std::size_t menu_slot = doc_.dialogs.size();
    doc_.dialogs.emplace_back(MenuDialog{});
    MenuDialog md{std::string(kMenuPrefix) + m.id, detail::sentence(menu_label(i)) + " " + std::string(kMenuLeadIn),
                  {}};
    TokenTable table(m.id);
    auto add = [&](Choice c) {
      table.claim(c);
      md.choices.push_back(std::move(c));
    };

    std::vector<std::size_t> records;
    std::size_t texts = 0;
    for (auto c : tree_.node(i).children) {
      if (std::holds_alternative<vxpl::Structured>(tree_.element(c))) records.push_back(c);
      if (std::holds_alternative<vxpl::Text>(tree_.element(c))) ++texts;
    }
    const GroupPlan group = plan_structured(tree_, records);

    std::size_t item_n = 0, text_n = 0, record_n = 0;
    for (auto c : tree_.node(i).children) {
      const auto& e = tree_.element(c);
      if (std::holds_alternative<vxpl::Menu>(e)) {
        add(menu_choice(c));
        menu(c);
      } else if (const auto* item = std::get_if<vxpl::MenuItem>(&e)) {
        ++item_n;
        const std::string leaf = "i-" + m.id + "-" + std::to_string(item_n);
        Choice choice{item->label, {}, Goto{leaf}};
        if (options_.numbering) {
          choice.label = std::to_string(item_n) + ". " + item->label;
          choice.tokens = {std::to_string(item_n)};
        } else {
          if (choice.label.empty()) choice.label = item->href.empty() ? "item " + std::to_string(item_n) : item->href;
          add_token(choice.tokens, text::normalize_utterance(choice.label));
        }
        add(std::move(choice));
        std::string say = "Selected: " + detail::sentence(item->label);
        if (!item->href.empty()) say += " " + detail::sentence(item->href);
        doc_.dialogs.emplace_back(LeafForm{leaf, say});
      } else if (std::holds_alternative<vxpl::Structured>(e)) {
        const RecordPlan& plan = group.records[record_n++];
        add(Choice{plan.keys.empty() ? plan.record_id : plan.keys.front(), plan.tokens,
                   Goto{std::string(kEntryPrefix) + plan.record_id}});
        doc_.dialogs.emplace_back(RecordForm{plan});
      } else if (const auto* t = std::get_if<vxpl::Text>(&e)) {
        ++text_n;
        const std::string leaf = "t-" + m.id + "-" + std::to_string(text_n);
        Choice choice{texts == 1 ? "Read text" : "Read text " + std::to_string(text_n), {}, Goto{leaf}};
        add_token(choice.tokens, text::normalize_utterance(choice.label));
        add(std::move(choice));
        doc_.dialogs.emplace_back(LeafForm{leaf, t->content});
      }
    }
    if (!records.empty()) {
      const std::string leaf = "a-" + m.id;
      add(Choice{"Read all", {"read all"}, Goto{leaf}});
      std::string say;
      for (const auto& p : group.records) say += (say.empty() ? "" : " ") + p.readout;
      doc_.dialogs.emplace_back(LeafForm{leaf, say});
    }
    if (is_root) {
      for (auto p : promoted_) add(menu_choice(p));
    } else {
      md.choices.push_back(Choice{"back", {"back"}, RaiseBack{}});
    }
    doc_.dialogs[menu_slot] = std::move(md);
  }

  const MenuTree& tree_;
  TranscodeOptions options_;
  std::vector<std::size_t> promoted_;
  Document doc_;
};

}  // namespace

std::vector<std::string> collect_promotions(const MenuTree& tree) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto* m = std::get_if<vxpl::Menu>(&tree.element(i));
    if (m != nullptr && m->promote && i != tree.root_index()) out.push_back(m->id);
  }
  return out;
}

GroupPlan plan_structured(const MenuTree& tree, std::span<const std::size_t> records) {
  GroupPlan group;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& s = std::get<vxpl::Structured>(tree.element(records[r]));
    RecordPlan plan;
    plan.record_id = s.id;
    for (auto c : tree.node(records[r]).children) {
      const auto* f = std::get_if<vxpl::Field>(&tree.element(c));
      if (f == nullptr) continue;
      if (f->is_key) plan.keys.push_back(f->value);
      else plan.fields.emplace_back(f->name.value_or(""), f->value);
    }
    std::string keys;
    for (const auto& k : plan.keys) keys += (keys.empty() ? "" : ", ") + k;
    plan.readout = detail::sentence(keys);
    for (const auto& [name, value] : plan.fields) {
      plan.readout += (plan.readout.empty() ? "" : " ") + detail::sentence(name + " " + value);
    }
    if (plan.fields.empty()) {
      group.diagnostics.push_back("record \"" + s.id + "\" has no named fields; readout is its key values only");
    }
    for (const auto& k : plan.keys) {
      add_token(plan.tokens, text::normalize_utterance(k));
      // "Blacksburg, VA" is also selectable as "blacksburg".
      if (auto comma = k.find(','); comma != std::string::npos) {
        add_token(plan.tokens, text::normalize_utterance(k.substr(0, comma)));
      }
    }
    if (plan.tokens.empty()) add_token(plan.tokens, text::normalize_utterance(s.id));
    if (r + 1 < records.size()) plan.next = std::get<vxpl::Structured>(tree.element(records[r + 1])).id;
    if (r > 0) plan.previous = std::get<vxpl::Structured>(tree.element(records[r - 1])).id;
    group.records.push_back(std::move(plan));
  }
  return group;
}

Document transcode(const MenuTree& tree, const TranscodeOptions& options) {
  Document doc = Transcoder(tree, options).run();
  // Record command menus: field names must not shadow next/previous/back.
  for (const auto& d : doc.dialogs) {
    const auto* r = std::get_if<RecordForm>(&d);
    if (r == nullptr) continue;
    TokenTable table(std::string(kRecordPrefix) + r->plan.record_id);
    table.claim(Choice{"next", {"next"}, RaiseBack{}});
    table.claim(Choice{"previous", {"previous"}, RaiseBack{}});
    for (const auto& [name, value] : r->plan.fields) {
      table.claim(Choice{name, {text::normalize_utterance(name)}, RaiseBack{}});
    }
  }
  if (auto problems = validate(doc); !problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::validation, msg);
  }
  return doc;
}

std::vector<std::string> dialog_ids(const Document& doc) {
  std::vector<std::string> ids;
  for (const auto& f : detail::lower(doc)) {
    ids.push_back(std::visit([](const auto& x) { return x.id; }, f));
  }
  return ids;
}

std::vector<std::string> validate(const Document& doc) {
  std::vector<std::string> problems;
  const auto flat = detail::lower(doc);
  std::set<std::string> ids;
  for (const auto& f : flat) {
    const auto& id = std::visit([](const auto& x) -> const std::string& { return x.id; }, f);
    if (!ids.insert(id).second) problems.push_back("duplicate dialog id \"" + id + "\"");
  }
  auto check = [&](const std::string& from, const std::string& target) {
    if (!ids.contains(target)) problems.push_back("dialog \"" + from + "\" targets unknown dialog \"" + target + "\"");
  };
  if (!ids.contains(doc.prologue.default_target)) {
    problems.push_back("default target \"" + doc.prologue.default_target + "\" is not a dialog");
  }
  for (const auto& f : flat) {
    if (const auto* form = std::get_if<detail::FlatForm>(&f)) {
      for (const auto& op : form->ops) {
        if (op.kind == detail::Op::push || op.kind == detail::Op::go) check(form->id, op.arg);
      }
    } else {
      const auto& menu = std::get<detail::FlatMenu>(f);
      for (const auto& c : menu.choices) {
        if (c.tokens.empty()) problems.push_back("choice \"" + c.label + "\" in \"" + menu.id + "\" has no tokens");
        if (const auto* g = std::get_if<Goto>(&c.action)) check(menu.id, g->target);
      }
    }
  }
  return problems;
}

}  // namespace vxt::vxml
