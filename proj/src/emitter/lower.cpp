#include "lower.hpp"

#include "vxt/text.hpp"

namespace vxt::vxml::detail {

namespace {

std::string suffix_readout(const RecordPlan& plan, std::size_t from) {
  std::string out;
  for (std::size_t k = from; k < plan.fields.size(); ++k) {
    if (!out.empty()) out += ' ';
    out += sentence(plan.fields[k].first + " " + plan.fields[k].second);
  }
  return out;
}

void lower_record(const RecordPlan& plan, std::vector<Flat>& out) {
  const std::string& id = plan.record_id;
  const std::string menu = std::string(kRecordPrefix) + id;
  out.emplace_back(FlatForm{std::string(kEntryPrefix) + id,
                            {{Op::push, std::string(kEntryPrefix) + id}, {Op::say, plan.readout}, {Op::go, menu}}});

  FlatMenu commands{menu, std::string(kRecordLeadIn), {}};
  for (std::size_t k = 0; k < plan.fields.size(); ++k) {
    commands.choices.push_back({plan.fields[k].first, {text::normalize_utterance(plan.fields[k].first)},
                                Goto{"j-" + id + "-" + std::to_string(k + 1)}});
  }
  commands.choices.push_back({"next", {"next"}, Goto{menu + "-next"}});
  commands.choices.push_back({"previous", {"previous"}, Goto{menu + "-previous"}});
  commands.choices.push_back({"back", {"back"}, RaiseBack{}});
  out.emplace_back(std::move(commands));

  for (std::size_t k = 0; k < plan.fields.size(); ++k) {
    out.emplace_back(FlatForm{"j-" + id + "-" + std::to_string(k + 1),
                              {{Op::say, suffix_readout(plan, k)}, {Op::go, menu}}});
  }
  auto step = [&](const std::optional<std::string>& neighbour, const char* dir, std::string_view end_text) {
    FlatForm f{menu + "-" + dir, {}};
    if (neighbour) {
      f.ops = {{Op::pop, {}}, {Op::go, std::string(kEntryPrefix) + *neighbour}};
    } else {
      f.ops = {{Op::say, std::string(end_text)}, {Op::go, menu}};
    }
    out.emplace_back(std::move(f));
  };
  step(plan.next, "next", kNoMoreItems);
  step(plan.previous, "previous", kFirstItem);
}

}  // namespace

std::string sentence(std::string_view text) {
  std::string out(text);
  if (out.empty()) return out;
  const char last = out.back();
  if (last != '.' && last != '!' && last != '?' && last != ':') out += '.';
  return out;
}

std::vector<Flat> lower(const Document& doc) {
  std::vector<Flat> out;
  for (const auto& d : doc.dialogs) {
    if (const auto* e = std::get_if<EntryForm>(&d)) {
      FlatForm f{e->id, {{Op::push, e->push}}};
      if (e->say) f.ops.push_back({Op::say, *e->say});
      f.ops.push_back({Op::go, e->next});
      out.emplace_back(std::move(f));
    } else if (const auto* m = std::get_if<MenuDialog>(&d)) {
      out.emplace_back(FlatMenu{m->id, m->prompt, m->choices});
    } else if (const auto* r = std::get_if<RecordForm>(&d)) {
      lower_record(r->plan, out);
    } else if (const auto* l = std::get_if<LeafForm>(&d)) {
      out.emplace_back(FlatForm{l->id, {{Op::push, l->id}, {Op::say, l->say}, {Op::back, {}}}});
    }
  }
  return out;
}

}  // namespace vxt::vxml::detail
