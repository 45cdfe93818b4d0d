#include <expat.h>

#include <memory>

#include "vxt/error.hpp"
#include "vxt/xml.hpp"

namespace vxt::xml {

namespace {

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

struct BuildState {
  XML_Parser parser = nullptr;
  dom::Node document;
  std::vector<dom::Node*> stack;
  bool has_root = false;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<BuildState*>(user);
  dom::Node el = dom::Node::element(name);
  el.line = XML_GetCurrentLineNumber(st.parser);
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) el.attributes.emplace_back(attrs[i], attrs[i + 1]);
  dom::Node& parent = st.stack.empty() ? st.document : *st.stack.back();
  parent.children.push_back(std::move(el));
  st.stack.push_back(&parent.children.back());
}

void XMLCALL on_end(void* user, const XML_Char*) {
  static_cast<BuildState*>(user)->stack.pop_back();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  auto& st = *static_cast<BuildState*>(user);
  if (st.stack.empty()) return;
  auto& siblings = st.stack.back()->children;
  if (!siblings.empty() && siblings.back().kind == dom::Node::Kind::text) {
    siblings.back().text.append(s, static_cast<std::size_t>(len));
  } else {
    siblings.push_back(dom::Node::text_node(std::string(s, static_cast<std::size_t>(len))));
  }
}

}  // namespace

dom::Node parse(std::string_view input) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error(ErrorCode::io, "cannot allocate XML parser");

  BuildState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  if (XML_Parse(parser.get(), input.data(), static_cast<int>(input.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw Error(ErrorCode::parse, std::to_string(XML_GetCurrentLineNumber(parser.get())) + ":" +
                                      std::to_string(XML_GetCurrentColumnNumber(parser.get()) + 1) +
                                      ": " + XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (st.document.children.size() != 1) throw Error(ErrorCode::parse, "1:1: no document element");
  return std::move(st.document.children.front());
}

std::string direct_text(const dom::Node& node) {
  std::string out;
  for (const auto& c : node.children) {
    if (c.kind == dom::Node::Kind::text) out += c.text;
  }
  return out;
}

}  // namespace vxt::xml
