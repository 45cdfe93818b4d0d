#include "lower.hpp"
#include "vxt/text.hpp"

namespace vxt::vxml {

namespace {

using text::xml_escape;

class Printer {
 public:
  void line(int depth, std::string_view s) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += s;
    out_ += '\n';
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string attr(std::string_view name, std::string_view value) {
  return " " + std::string(name) + "=\"" + xml_escape(value, true) + "\"";
}

std::string ref(std::string_view id) { return "#" + std::string(id); }

// Back sequence: drop the current entry, then jump to the previous one or
// to the default target once the history is exhausted.
void back_body(Printer& p, int depth, const std::string& hist) {
  p.line(depth, "<script>" + hist + ".pop()</script>");
  p.line(depth, "<var" + attr("name", kJumpVar) + attr("expr", "(" + hist + ".pop())||application." +
                                                                    std::string(kDefaultVar)) +
                    "/>");
  p.line(depth, "<goto" + attr("expr", kJumpVar) + "/>");
}

void print_form(Printer& p, const detail::FlatForm& f, const std::string& hist) {
  p.line(1, "<form" + attr("id", f.id) + ">");
  p.line(2, "<block>");
  for (const auto& op : f.ops) {
    switch (op.kind) {
      case detail::Op::push:
        p.line(3, "<script>" + hist + ".push(\"" + xml_escape(ref(op.arg)) + "\")</script>");
        break;
      case detail::Op::pop:
        p.line(3, "<script>" + hist + ".pop()</script>");
        break;
      case detail::Op::say:
        p.line(3, "<prompt>" + xml_escape(op.arg) + "</prompt>");
        break;
      case detail::Op::go:
        p.line(3, "<goto" + attr("next", ref(op.arg)) + "/>");
        break;
      case detail::Op::back:
        back_body(p, 3, hist);
        break;
    }
  }
  p.line(2, "</block>");
  p.line(1, "</form>");
}

void print_menu(Printer& p, const detail::FlatMenu& m) {
  p.line(1, "<menu" + attr("id", m.id) + ">");
  p.line(2, "<prompt>" + xml_escape(m.prompt) + " <enumerate/></prompt>");
  for (const auto& c : m.choices) {
    std::string open = "<choice";
    if (const auto* g = std::get_if<Goto>(&c.action)) open += attr("next", ref(g->target));
    else if (std::holds_alternative<RaiseBack>(c.action)) open += attr("event", kBackEvent);
    else open += attr("event", "exit");
    if (c.tokens != std::vector<std::string>{text::normalize_utterance(c.label)}) {
      std::string joined;
      for (const auto& t : c.tokens) joined += (joined.empty() ? "" : "|") + t;
      open += attr("tokens", joined);
    }
    p.line(2, open + ">" + xml_escape(c.label) + "</choice>");
  }
  p.line(1, "</menu>");
}

}  // namespace

std::string emit_voicexml(const Document& doc) {
  Printer p;
  p.line(0, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
  p.line(0, "<vxml version=\"2.0\" xmlns=\"http://www.w3.org/2001/vxml\">");
  p.line(1, "<var" + attr("name", doc.prologue.history_var) + attr("expr", "new Array()") + "/>");
  p.line(1, "<var" + attr("name", kDefaultVar) + attr("expr", "'" + ref(doc.prologue.default_target) + "'") + "/>");
  p.line(1, "<catch" + attr("event", kBackEvent) + ">");
  back_body(p, 2, doc.prologue.history_var);
  p.line(1, "</catch>");
  for (const auto& f : detail::lower(doc)) {
    if (const auto* form = std::get_if<detail::FlatForm>(&f)) print_form(p, *form, doc.prologue.history_var);
    else print_menu(p, std::get<detail::FlatMenu>(f));
  }
  p.line(0, "</vxml>");
  return p.take();
}

}  // namespace vxt::vxml
