#include <doctest.h>

#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "vxt/error.hpp"
#include "vxt/vxml.hpp"
#include "vxt/xml.hpp"

using namespace vxt;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(VXT_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

vxpl::MenuTree tree_of(const vxpl::Document& doc) {
  auto r = vxpl::link_and_validate(doc);
  REQUIRE(r.ok());
  return std::move(*r.tree);
}

vxpl::MenuTree portal() { return tree_of(vxpl::parse(slurp("portal.vxpl")).document); }

template <class T>
const T* dialog(const vxml::Document& doc, std::string_view id) {
  for (const auto& d : doc.dialogs) {
    if (const auto* t = std::get_if<T>(&d)) {
      if constexpr (std::is_same_v<T, vxml::RecordForm>) {
        if (t->plan.record_id == id) return t;
      } else if (t->id == id) {
        return t;
      }
    }
  }
  return nullptr;
}

std::vector<std::string> labels(const vxml::MenuDialog& m) {
  std::vector<std::string> out;
  for (const auto& c : m.choices) out.push_back(c.label);
  return out;
}

int back_choices(const vxml::MenuDialog& m) {
  int n = 0;
  for (const auto& c : m.choices) n += std::holds_alternative<vxml::RaiseBack>(c.action);
  return n;
}

// The parsed VoiceXML element with the given tag and id attribute.
const dom::Node* element_by_id(const dom::Node& root, std::string_view tag, std::string_view id) {
  for (const auto& c : root.children) {
    if (c.is_element(tag) && c.attr("id") && *c.attr("id") == id) return &c;
  }
  return nullptr;
}

std::vector<const dom::Node*> child_elements(const dom::Node& n, std::string_view tag) {
  std::vector<const dom::Node*> out;
  for (const auto& c : n.children) {
    if (c.is_element(tag)) out.push_back(&c);
  }
  return out;
}

}  // namespace

TEST_CASE("root menu offers the top-level menus plus the promoted one") {
  const auto doc = vxml::transcode(portal());
  const auto* top = dialog<vxml::MenuDialog>(doc, "m-top");
  REQUIRE(top);
  CHECK(labels(*top) == std::vector<std::string>{"News", "Weather", "Sports", "Baseball"});
  CHECK(back_choices(*top) == 0);
  CHECK(std::get<vxml::Goto>(top->choices[3].action).target == "f-baseball");
  CHECK(top->prompt == "Welcome to the Web Portal. Please say one of the followings:");
  CHECK(doc.prologue.default_target == "f-top");
  CHECK(doc.prologue.history_var == "aNavHistory");
}

TEST_CASE("emitted prologue catches ongoback with pop, pop-or-default, goto") {
  const auto root = xml::parse(vxml::emit_voicexml(vxml::transcode(portal())));
  CHECK(root.name == "vxml");
  CHECK(*root.attr("version") == "2.0");
  const auto catches = child_elements(root, "catch");
  REQUIRE(catches.size() == 1);
  CHECK(*catches[0]->attr("event") == "ongoback");
  std::vector<const dom::Node*> body;
  for (const auto& c : catches[0]->children) {
    if (c.is_element()) body.push_back(&c);
  }
  REQUIRE(body.size() == 3);
  CHECK(body[0]->name == "script");
  CHECK(xml::direct_text(*body[0]) == "aNavHistory.pop()");
  CHECK(body[1]->name == "var");
  CHECK(*body[1]->attr("expr") == "(aNavHistory.pop())||application.sDefaultURL");
  CHECK(body[2]->name == "goto");
  CHECK(*body[2]->attr("expr") == *body[1]->attr("name"));

  const auto* menu = element_by_id(root, "menu", "m-top");
  REQUIRE(menu);
  std::vector<std::string> spoken;
  for (const auto* c : child_elements(*menu, "choice")) spoken.push_back(xml::direct_text(*c));
  CHECK(spoken == std::vector<std::string>{"News", "Weather", "Sports", "Baseball"});
}

TEST_CASE("every non-root menu of the portal has exactly one back choice") {
  const auto doc = vxml::transcode(portal());
  for (const auto& d : doc.dialogs) {
    const auto* m = std::get_if<vxml::MenuDialog>(&d);
    if (!m) continue;
    CHECK(back_choices(*m) == (m->id == "m-top" ? 0 : 1));
  }
}

TEST_CASE("headlines are numbered and answer to their number") {
  const auto doc = vxml::transcode(portal());
  const auto* us = dialog<vxml::MenuDialog>(doc, "m-us");
  REQUIRE(us);
  CHECK(labels(*us) == std::vector<std::string>{"1. Headline 1", "2. Headline 2", "back"});
  CHECK(us->choices[1].tokens == std::vector<std::string>{"2"});
  const auto* leaf = dialog<vxml::LeafForm>(doc, "i-us-2");
  REQUIRE(leaf);
  CHECK(leaf->say == "Selected: Headline 2. url for Headline 2.");

  const auto plain = vxml::transcode(portal(), {.numbering = false});
  const auto* us_plain = dialog<vxml::MenuDialog>(plain, "m-us");
  CHECK(labels(*us_plain) == std::vector<std::string>{"Headline 1", "Headline 2", "back"});
  CHECK(us_plain->choices[0].tokens == std::vector<std::string>{"headline 1"});
}

TEST_CASE("record readout and plan") {
  const auto t = portal();
  const auto doc = vxml::transcode(t);
  const auto* rec = dialog<vxml::RecordForm>(doc, "bburg");
  REQUIRE(rec);
  CHECK(rec->plan.readout == "Blacksburg, VA. Low 57. High 65.");
  CHECK(rec->plan.tokens == std::vector<std::string>{"blacksburg, va", "blacksburg"});
  CHECK(rec->plan.next == std::optional<std::string>("roanoke"));
  CHECK_FALSE(rec->plan.previous);

  const auto* weather = dialog<vxml::MenuDialog>(doc, "m-weather");
  CHECK(labels(*weather) == std::vector<std::string>{"Blacksburg, VA", "Roanoke, VA", "Read all", "back"});
  const auto* all = dialog<vxml::LeafForm>(doc, "a-weather");
  REQUIRE(all);
  CHECK(all->say.find("Low 57") != std::string::npos);
  CHECK(all->say.find("High 68") != std::string::npos);

  const auto games = t.node(*t.find("baseball")).children;
  const auto plan = vxml::plan_structured(t, games);
  REQUIRE(plan.records.size() == 3);
  CHECK(plan.records[0].keys == std::vector<std::string>{"Atlanta", "Philadelphia"});
  CHECK(plan.records[0].readout == "Atlanta, Philadelphia. Atlanta 3. Philadelphia 5.");
  CHECK(plan.records[1].previous == std::optional<std::string>("Atlanta-Philly"));
  CHECK(plan.records[2].next == std::nullopt);
  CHECK(plan.diagnostics.empty());
}

TEST_CASE("record dialogs expand into field, next and previous menus") {
  const auto doc = vxml::transcode(portal());
  const auto ids = vxml::dialog_ids(doc);
  const std::set<std::string> have(ids.begin(), ids.end());
  CHECK(have.size() == ids.size());
  for (const char* id : {"f-bburg", "r-bburg", "j-bburg-1", "j-bburg-2", "r-bburg-next", "r-bburg-previous"}) {
    CHECK(have.contains(id));
  }
  const auto root = xml::parse(vxml::emit_voicexml(doc));
  const auto* cmd = element_by_id(root, "menu", "r-bburg");
  REQUIRE(cmd);
  std::vector<std::string> spoken;
  for (const auto* c : child_elements(*cmd, "choice")) spoken.push_back(xml::direct_text(*c));
  CHECK(spoken == std::vector<std::string>{"Low", "High", "next", "previous", "back"});
}

TEST_CASE("promotions are found by a plain scan") {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    const auto doc = testing::random_document(rng, {.promote_probability = 0.4});
    const auto t = tree_of(doc);
    std::vector<std::string> expected;
    for (const auto& e : doc.elements) {
      const auto* m = std::get_if<vxpl::Menu>(&e);
      if (m && m->promote && m->parent_id) expected.push_back(m->id);
    }
    CHECK(vxml::collect_promotions(t) == expected);
  }
}

TEST_CASE("token collisions are rejected and name both choices") {
  vxpl::Document doc{{
      vxpl::Menu{"t", std::nullopt, false, "Top"},
      vxpl::Menu{"a", "t", false, "Sports"},
      vxpl::Menu{"b", "t", false, "sports"},
  }};
  try {
    vxml::transcode(tree_of(doc));
    FAIL("expected collision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
    const std::string what = e.what();
    CHECK(what.find("\"Sports\"") != std::string::npos);
    CHECK(what.find("\"sports\"") != std::string::npos);
  }

  vxpl::Document reserved{{
      vxpl::Menu{"t", std::nullopt, false, "Top"},
      vxpl::Menu{"a", "t", false, "Back"},
  }};
  CHECK_THROWS_AS(vxml::transcode(tree_of(reserved)), Error);

  vxpl::Document field_clash{{
      vxpl::Menu{"t", std::nullopt, false, "Top"},
      vxpl::Structured{"s", "t"},
      vxpl::Field{"s", true, std::nullopt, "Key"},
      vxpl::Field{"s", false, "Next", "1"},
  }};
  CHECK_THROWS_AS(vxml::transcode(tree_of(field_clash)), Error);
}

TEST_CASE("ids that cannot name a dialog are rejected") {
  vxpl::Document doc{{vxpl::Menu{"top level", std::nullopt, false, "Top"}}};
  CHECK_THROWS_AS(vxml::transcode(tree_of(doc)), Error);
}

TEST_CASE("validate finds dangling targets and duplicate ids") {
  auto doc = vxml::transcode(portal());
  CHECK(vxml::validate(doc).empty());
  auto broken = doc;
  broken.dialogs.push_back(vxml::MenuDialog{"m-x", "X.", {{"Go", {"go"}, vxml::Goto{"nowhere"}}}});
  broken.dialogs.push_back(vxml::LeafForm{"m-x", "dup"});
  const auto problems = vxml::validate(broken);
  CHECK(problems.size() >= 2);
  auto bad_default = doc;
  bad_default.prologue.default_target = "f-missing";
  CHECK_FALSE(vxml::validate(bad_default).empty());
}

TEST_CASE("emission is deterministic and uses only the interpreted tags") {
  const auto t = portal();
  const std::string a = vxml::emit_voicexml(vxml::transcode(t));
  const std::string b = vxml::emit_voicexml(vxml::transcode(portal()));
  CHECK(a == b);
  const std::set<std::string> allowed{"vxml", "var", "catch", "script", "form", "block", "goto",
                                      "menu", "prompt", "enumerate", "choice"};
  std::function<void(const dom::Node&)> walk = [&](const dom::Node& n) {
    if (!n.is_element()) return;
    CHECK(allowed.contains(n.name));
    for (const auto& c : n.children) walk(c);
  };
  walk(xml::parse(a));
}

TEST_CASE("markup in labels is escaped") {
  vxpl::Document doc{{
      vxpl::Menu{"t", std::nullopt, false, "Fish & <Chips>"},
      vxpl::MenuItem{"t", "a?b=1&c=2", "Q & A"},
  }};
  const std::string out = vxml::emit_voicexml(vxml::transcode(tree_of(doc)));
  CHECK(out.find("Fish &amp; &lt;Chips&gt;") != std::string::npos);
  CHECK_NOTHROW(xml::parse(out));
}
