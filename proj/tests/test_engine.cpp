#include <doctest.h>

#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "vxt/engine.hpp"
#include "vxt/error.hpp"

using namespace vxt;
using engine::Outcome;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(VXT_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

engine::Machine machine_of(const vxpl::Document& doc) {
  auto r = vxpl::link_and_validate(doc);
  REQUIRE(r.ok());
  return engine::load_machine(vxml::transcode(*r.tree));
}

const engine::Machine& portal() {
  static const engine::Machine m = machine_of(vxpl::parse(slurp("portal.vxpl")).document);
  return m;
}

using Stack = std::vector<std::string>;

engine::DialogState run(const engine::Machine& m, const std::vector<std::string>& utterances) {
  return engine::run_script(m, utterances).back().state;
}

ErrorCode load_error(const std::string& body) {
  try {
    engine::load_machine("<vxml version=\"2.0\">" + body + "</vxml>");
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::usage;
}

// Every dialog executed while exploring all (current, stack) states through
// every offered token plus "back".
std::set<std::string> dynamically_visited(const engine::Machine& m) {
  auto s = engine::start(m);
  std::set<std::string> visited(s.visited.begin(), s.visited.end());
  std::set<std::pair<std::string, Stack>> seen{{s.state.current, s.state.nav_stack}};
  std::deque<engine::DialogState> queue{s.state};
  while (!queue.empty()) {
    const auto state = queue.front();
    queue.pop_front();
    std::vector<std::string> words{"back"};
    for (const auto& c : engine::offered_choices(m, state)) words.insert(words.end(), c.tokens.begin(), c.tokens.end());
    for (const auto& w : words) {
      auto r = engine::step(m, state, w);
      visited.insert(r.visited.begin(), r.visited.end());
      if (r.state.phase == engine::Phase::terminated) continue;
      if (seen.insert({r.state.current, r.state.nav_stack}).second) queue.push_back(r.state);
    }
  }
  return visited;
}

}  // namespace

TEST_CASE("start lands on the root menu with the root on the stack") {
  const auto s = engine::start(portal());
  CHECK(s.state.current == "m-top");
  CHECK(s.state.nav_stack == Stack{"top"});
  CHECK(s.prompt == "Welcome to the Web Portal. Please say one of the followings: News, Weather, Sports, Baseball");
  CHECK(s.visited == std::vector<std::string>{"f-top", "m-top"});
  CHECK(s.diagnostics.empty());
}

TEST_CASE("back from a promoted menu returns to the root") {
  const auto a = run(portal(), {"baseball", "back"});
  CHECK(a.current == "m-top");
  CHECK(a.nav_stack == Stack{"top"});
  const auto b = run(portal(), {"sports", "baseball", "back"});
  CHECK(b.current == "m-sports");
  CHECK(b.nav_stack == Stack{"top", "sports"});
}

TEST_CASE("record selection speaks the readout") {
  const auto t = engine::run_script(portal(), {"weather", "blacksburg, va"});
  REQUIRE(t.size() == 3);
  const auto& text = t.back().outcome.text;
  CHECK(text.find("Low 57") != std::string::npos);
  CHECK(text.find("High 65") != std::string::npos);
  CHECK(t.back().state.current == "r-bburg");
  CHECK(t.back().state.nav_stack == Stack{"top", "weather", "bburg"});
  // The part before the comma is accepted too.
  CHECK(run(portal(), {"weather", "Blacksburg"}).current == "r-bburg");
}

TEST_CASE("headline selection by number") {
  const auto t = engine::run_script(portal(), {"news", "us", "2"});
  REQUIRE(t.size() == 4);
  CHECK(t[2].outcome.text.find("1. Headline 1, 2. Headline 2, back") != std::string::npos);
  CHECK(t[3].outcome.text.rfind("Selected: Headline 2.", 0) == 0);
  CHECK(t[3].state.current == "m-us");
  CHECK(t[3].state.nav_stack == t[2].state.nav_stack);
}

TEST_CASE("next and previous walk the record list") {
  const auto t = engine::run_script(portal(), {"weather", "blacksburg", "previous", "next", "next", "previous"});
  REQUIRE(t.size() == 7);
  CHECK(t[3].outcome.text.rfind("This is the first item.", 0) == 0);
  CHECK(t[3].state.nav_stack == Stack{"top", "weather", "bburg"});
  CHECK(t[4].outcome.text.rfind("Roanoke, VA. Low 59. High 68.", 0) == 0);
  CHECK(t[4].state.nav_stack == Stack{"top", "weather", "roanoke"});
  CHECK(t[5].outcome.text.rfind("No more items.", 0) == 0);
  CHECK(t[6].state.nav_stack == Stack{"top", "weather", "bburg"});
  CHECK(run(portal(), {"weather", "roanoke", "back"}).nav_stack == Stack{"top", "weather"});
}

TEST_CASE("field readout leaves the position unchanged") {
  const auto t = engine::run_script(portal(), {"sports", "baseball", "oakland", "seattle"});
  CHECK(t.back().outcome.text.rfind("Seattle 2.", 0) == 0);
  CHECK(t.back().state.nav_stack == Stack{"top", "sports", "baseball", "Oakland-Seattle"});
}

TEST_CASE("unrecognized input changes nothing and replays the prompt") {
  const auto s = engine::start(portal()).state;
  for (const char* junk : {"", "   ", "xyzzy", "weather report", "1"}) {
    const auto r = engine::step(portal(), s, junk);
    CHECK(r.outcome.kind == Outcome::no_match);
    CHECK(r.outcome.text == std::string(engine::kNoMatchPrefix) + s.last_prompt);
    CHECK(r.state == s);
  }
}

TEST_CASE("back at the root replays the root menu") {
  const auto s = engine::start(portal()).state;
  const auto r = engine::step(portal(), s, "back");
  CHECK(r.outcome.kind == Outcome::prompt);
  CHECK(r.state.current == "m-top");
  CHECK(r.state.nav_stack == Stack{"top"});
}

TEST_CASE("exit and goodbye terminate; stepping afterwards is misuse") {
  for (const char* word : {"exit", "Goodbye"}) {
    const auto s = run(portal(), {"news"});
    const auto r = engine::step(portal(), s, word);
    CHECK(r.outcome.kind == Outcome::terminated);
    CHECK(r.outcome.text == engine::kGoodbye);
    CHECK(r.state.phase == engine::Phase::terminated);
    CHECK(engine::offered_choices(portal(), r.state).empty());
    try {
      engine::step(portal(), r.state, "news");
      FAIL("expected usage error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::usage);
    }
  }
  const auto t = engine::run_script(portal(), {"exit", "news"});
  CHECK(t.size() == 2);
}

TEST_CASE("offered choices mirror the menu") {
  const auto s = run(portal(), {"weather"});
  const auto c = engine::offered_choices(portal(), s);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == engine::ChoiceView{"Blacksburg, VA", {"blacksburg, va", "blacksburg"}});
  CHECK(c[3] == engine::ChoiceView{"back", {"back"}});
}

TEST_CASE("script parsing and transcript format") {
  CHECK(engine::parse_script(slurp("walk.txt")) == std::vector<std::string>{"sports", "baseball", "back"});
  CHECK(engine::parse_script("a\r\n\n  # c\n b \n") == std::vector<std::string>{"a", "b"});
  const auto text = engine::format_transcript(engine::run_script(portal(), engine::parse_script(slurp("walk.txt"))));
  CHECK(text.rfind("YOU: (start)\nSYS: Welcome", 0) == 0);
  CHECK(text.size() >= 20);
  CHECK(text.find("YOU: baseball\n") != std::string::npos);
  CHECK(text.ends_with("STACK: top,sports\n"));
}

TEST_CASE("a hand-written document in the supported subset") {
  const std::string doc = R"xml(<?xml version="1.0"?>
<vxml version="2.0" xmlns="http://www.w3.org/2001/vxml">
  <var name="hist" expr="new Array()"/>
  <var name="home" expr="'#f-main'"/>
  <catch event="ongoback">
    <script>hist.pop();</script>
    <var name="dest" expr="(hist.pop()) || home"/>
    <goto expr="dest"/>
  </catch>
  <form id="f-main"><block>
    <script>hist.push('#f-main')</script>
    <goto next="#main"/>
  </block></form>
  <menu id="main">
    <prompt>Main menu. <enumerate/></prompt>
    <choice next="#f-sub" tokens="sub menu|sub">Sub</choice>
    <choice next="#bye">Leave</choice>
    <choice event="exit">quit</choice>
  </menu>
  <form id="f-sub"><block>
    <script>hist.push("#f-sub")</script>
    <prompt>Entering.</prompt>
    <goto next="#sub"/>
  </block></form>
  <menu id="sub">
    <prompt>Sub menu.</prompt>
    <choice event="ongoback">back</choice>
  </menu>
  <form id="bye"><block><prompt>See you.</prompt></block></form>
</vxml>)xml";
  const auto m = engine::load_machine(doc);
  CHECK(m.start_id() == "f-main");
  CHECK(m.history_var() == "hist");
  CHECK(m.has_back_handler());
  const auto s = engine::start(m);
  CHECK(s.prompt == "Main menu. Sub, Leave, quit");
  CHECK(s.state.nav_stack == Stack{"main"});
  const auto sub = engine::step(m, s.state, "SUB MENU");
  CHECK(sub.outcome.text == "Entering. Sub menu.");
  CHECK(sub.state.nav_stack == Stack{"main", "sub"});
  const auto up = engine::step(m, sub.state, "back");
  CHECK(up.state.current == "main");
  CHECK(up.state.nav_stack == Stack{"main"});
  CHECK(engine::step(m, s.state, "quit").state.phase == engine::Phase::terminated);
  // A form that falls off its end ends the dialog after speaking.
  const auto bye = engine::step(m, s.state, "leave");
  CHECK(bye.state.phase == engine::Phase::terminated);
  CHECK(bye.outcome.kind == Outcome::terminated);
  CHECK(bye.outcome.text.find("See you.") != std::string::npos);
}

TEST_CASE("documents outside the subset are rejected") {
  CHECK(load_error("<form id=\"a\"><field name=\"x\"/></form>") == ErrorCode::unsupported);
  CHECK(load_error("<form id=\"a\"><block><script>doSomething()</script></block></form>") == ErrorCode::unsupported);
  CHECK(load_error("<form id=\"a\"><block><goto next=\"#nowhere\"/></block></form>") == ErrorCode::target);
  CHECK(load_error("<form id=\"a\"><block><goto next=\"page.vxml\"/></block></form>") == ErrorCode::target);
  CHECK(load_error("<menu id=\"m\"><choice next=\"#gone\">x</choice></menu>") == ErrorCode::target);
  CHECK(load_error("<form id=\"a\"><block>") == ErrorCode::parse);
  try {
    engine::load_machine("<vxml><subdialog src=\"x\"/></vxml>");
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("subdialog") != std::string::npos);
  }
}

TEST_CASE("stack display strips the hash and the entry prefix") {
  const auto& m = portal();
  CHECK(m.display("#f-top") == "top");
  CHECK(m.literal("top") == "#f-top");
  CHECK(m.display("#i-us-1") == "i-us-1");
}

TEST_CASE("static tree of the portal document") {
  const auto root = engine::static_tree(portal());
  CHECK(root.kind == engine::StaticNode::menu);
  CHECK(root.id == "top");
  REQUIRE(root.children.size() == 4);
  CHECK(root.children[1].label == "Weather");
  CHECK(root.children[1].children[0].kind == engine::StaticNode::record);
  CHECK(root.children[1].children[0].id == "bburg");
  CHECK(root.children[1].children[2].kind == engine::StaticNode::leaf);
  CHECK(root.children[3].label == "Baseball");
  CHECK(root.children[3].repeated);
  CHECK_FALSE(root.children[2].children[0].repeated);
}

TEST_CASE("statically reachable dialogs are exactly those the interpreter visits") {
  CHECK(engine::statically_reachable(portal()) == dynamically_visited(portal()));
  std::mt19937 rng(5);
  for (int round = 0; round < 60; ++round) {
    const auto m = machine_of(testing::random_document(rng, {.max_elements = 25}));
    const auto stat = engine::statically_reachable(m);
    CHECK(stat == dynamically_visited(m));
    std::set<std::string> all;
    for (const auto& d : m.dialogs()) all.insert(d.id);
    CHECK(stat == all);
  }
}

TEST_CASE("the machine can be rebuilt from its own emission") {
  auto r = vxpl::link_and_validate(vxpl::parse(slurp("portal.vxpl")).document);
  const auto doc = vxml::transcode(*r.tree);
  const auto a = engine::load_machine(doc);
  const auto b = engine::load_machine(vxml::emit_voicexml(doc));
  CHECK(engine::format_transcript(engine::run_script(a, {"news", "world", "1", "back", "back"})) ==
        engine::format_transcript(engine::run_script(b, {"news", "world", "1", "back", "back"})));
}
