#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "vxt/error.hpp"
#include "vxt/vxpl.hpp"

using namespace vxt;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(VXT_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

vxpl::Document portal() { return vxpl::parse(slurp("portal.vxpl")).document; }

bool mentions(const std::vector<std::string>& diags, const std::string& what) {
  for (const auto& d : diags) {
    if (d.find(what) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("portal listing parses into the expected elements") {
  const auto doc = portal();
  REQUIRE(doc.elements.size() == 34);
  CHECK(std::get<vxpl::Menu>(doc.elements[0]) == vxpl::Menu{"top", std::nullopt, false, "Welcome to the Web Portal"});
  CHECK(std::get<vxpl::MenuItem>(doc.elements[3]) == vxpl::MenuItem{"us", "url for Headline 1", "Headline 1"});
  CHECK(std::get<vxpl::Field>(doc.elements[12]) == vxpl::Field{"bburg", false, "High", "65"});
  CHECK(std::get<vxpl::Menu>(doc.elements[18]).promote);
}

TEST_CASE("attribute-form and anchor-form menu items are the same element") {
  const auto a = vxpl::parse(
      "<root><menu id=\"t\"><prompt>T</prompt></menu>"
      "<menuitem parentid=\"t\"><a href=\"u\">L</a></menuitem></root>");
  const auto b = vxpl::parse(
      "<root><menu id=\"t\"><prompt>T</prompt></menu>"
      "<menuitems parentid=\"t\" href=\"u\" label=\"L\"/></root>");
  CHECK(vxpl::structurally_equal(a.document, b.document));
}

TEST_CASE("missing prompt defaults to the id with a diagnostic") {
  const auto r = vxpl::parse("<root><menu id=\"t\"/></root>");
  CHECK(std::get<vxpl::Menu>(r.document.elements[0]).prompt == "t");
  CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("schema errors") {
  auto code = [](const std::string& s) {
    try {
      vxpl::parse(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::usage;
  };
  CHECK(code("<root><menu id=\"t\"") == ErrorCode::parse);
  CHECK(code("<root><banner/></root>") == ErrorCode::schema);
  CHECK(code("<root><field parentid=\"x\">v</field></root>") == ErrorCode::schema);
  CHECK(code("<root><field parentid=\"x\" key=\"true\" name=\"n\">v</field></root>") == ErrorCode::schema);
  CHECK(code("<root><menu parentid=\"x\"/></root>") == ErrorCode::schema);
  CHECK(code("<root><menu id=\"t\" promote=\"yes\"/></root>") == ErrorCode::schema);
}

TEST_CASE("serialize is a parse fixpoint on the portal listing") {
  const auto doc = portal();
  const std::string once = vxpl::serialize(doc);
  CHECK(vxpl::parse(once).document == doc);
  CHECK(vxpl::serialize(vxpl::parse(once).document) == once);
}

TEST_CASE("canonical form escapes text") {
  vxpl::Document doc{{vxpl::Menu{"t", std::nullopt, false, "Fish & <Chips> \"x\""}}};
  const std::string s = vxpl::serialize(doc);
  CHECK(s.find("Fish &amp; &lt;Chips&gt;") != std::string::npos);
  CHECK(vxpl::parse(s).document == doc);
}

TEST_CASE("equivalence up to ids") {
  const auto doc = portal();
  auto renamed = doc;
  for (auto& e : renamed.elements) {
    if (auto* s = std::get_if<vxpl::Structured>(&e); s && s->id == "bburg") s->id = "wx-1";
    if (auto* f = std::get_if<vxpl::Field>(&e); f && f->parent_id == "bburg") f->parent_id = "wx-1";
  }
  CHECK(vxpl::equivalent_up_to_ids(doc, renamed));
  CHECK_FALSE(vxpl::structurally_equal(doc, renamed));

  // Renaming must be one-to-one: merging two records breaks equivalence.
  auto merged = doc;
  for (auto& e : merged.elements) {
    if (auto* s = std::get_if<vxpl::Structured>(&e); s && s->id == "roanoke") s->id = "bburg";
    if (auto* f = std::get_if<vxpl::Field>(&e); f && f->parent_id == "roanoke") f->parent_id = "bburg";
  }
  CHECK_FALSE(vxpl::equivalent_up_to_ids(doc, merged));

  auto edited = doc;
  std::get<vxpl::Field>(edited.elements[12]).value = "66";
  CHECK_FALSE(vxpl::equivalent_up_to_ids(doc, edited));
}

TEST_CASE("linking the portal listing") {
  const auto r = vxpl::link_and_validate(portal());
  REQUIRE(r.ok());
  const auto& tree = *r.tree;
  CHECK(tree.root_index() == 0);
  CHECK(tree.root().children.size() == 3);
  CHECK(tree.node(*tree.find("baseball")).depth == 3);
  CHECK(tree.node(*tree.find("Atlanta-Philly")).depth == 4);
  CHECK_FALSE(tree.find("nope"));
}

TEST_CASE("every violation is reported, not just the first") {
  const auto r = vxpl::link_and_validate(vxpl::parse(slurp("bad.vxpl")).document);
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].find("newz") != std::string::npos);

  vxpl::Document doc{{
      vxpl::Menu{"a", std::nullopt, false, "A"},
      vxpl::Menu{"a", "a", false, "dup"},
      vxpl::Menu{"b", std::nullopt, false, "B"},
      vxpl::Structured{"s", "a"},
      vxpl::Field{"s", false, "n", "1"},
      vxpl::MenuItem{"s", "u", "L"},
      vxpl::Menu{"c", "d", false, "C"},
      vxpl::Menu{"d", "c", false, "D"},
  }};
  const auto bad = vxpl::link_and_validate(doc);
  CHECK_FALSE(bad.ok());
  CHECK(mentions(bad.diagnostics, "duplicate id"));
  CHECK(mentions(bad.diagnostics, "multiple root"));
  CHECK(mentions(bad.diagnostics, "no key"));
  CHECK(mentions(bad.diagnostics, "must name a"));
  CHECK(mentions(bad.diagnostics, "cycle"));
}

TEST_CASE("injected violations are always caught") {
  std::mt19937 rng(11);
  for (int round = 0; round < 200; ++round) {
    auto doc = testing::random_document(rng, {.max_elements = 30});
    REQUIRE(vxpl::link_and_validate(doc).ok());
    if (doc.elements.size() < 2) continue;
    const std::size_t victim = 1 + rng() % (doc.elements.size() - 1);
    auto broken = doc;
    std::visit([](auto& e) { e.parent_id = "missing"; }, broken.elements[victim]);
    const auto r = vxpl::link_and_validate(broken);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "missing"));

    auto second_root = doc;
    second_root.elements.push_back(vxpl::Menu{"extra-root", std::nullopt, false, "X"});
    CHECK_FALSE(vxpl::link_and_validate(second_root).ok());
  }
}

TEST_CASE("level rendering matches the golden listing") {
  const auto r = vxpl::link_and_validate(portal());
  REQUIRE(r.ok());
  CHECK(vxpl::render_levels(*r.tree) == slurp("portal.tree.txt"));
}

TEST_CASE("a promoted menu directly under the root is not repeated") {
  vxpl::Document doc{{
      vxpl::Menu{"t", std::nullopt, false, "Top"},
      vxpl::Menu{"a", "t", true, "Alpha"},
  }};
  const auto r = vxpl::link_and_validate(doc);
  REQUIRE(r.ok());
  const std::string out = vxpl::render_levels(*r.tree);
  CHECK(out.find("Alpha") == out.rfind("Alpha"));
}
