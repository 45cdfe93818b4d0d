#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vxt/annotator.hpp"
#include "vxt/cli.hpp"
#include "vxt/dom.hpp"
#include "vxt/error.hpp"
#include "vxt/text.hpp"
#include "vxt/vxml.hpp"
#include "vxt/xml.hpp"

namespace vxt::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
  std::string input;
  std::string annotations;
  std::string output;
  std::string emit_vxpl;
  std::string script;
  bool json = false;
  bool lenient = false;
  bool no_numbering = false;
  std::optional<int> port;
  std::string host = "127.0.0.1";
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw Error(ErrorCode::io, "error while reading " + path);
  return ss.str();
}

// All artifacts of a command are staged and only renamed into place once
// every one of them has been written.
class Outputs {
 public:
  void add(std::string path, std::string content) { files_.push_back({std::move(path), std::move(content)}); }

  void commit(std::ostream& out) {
    std::vector<std::pair<fs::path, fs::path>> staged;
    auto cleanup = [&] {
      std::error_code ec;
      for (const auto& [tmp, dest] : staged) fs::remove(tmp, ec);
    };
    for (const auto& [path, content] : files_) {
      if (path.empty() || path == "-") continue;
      fs::path dest(path);
      fs::path tmp = dest;
      tmp += ".vxt-tmp";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << content;
      f.close();
      if (!f) {
        cleanup();
        std::error_code ec;
        fs::remove(tmp, ec);
        throw Error(ErrorCode::io, "cannot write " + path);
      }
      staged.emplace_back(tmp, dest);
    }
    for (const auto& [tmp, dest] : staged) {
      std::error_code ec;
      fs::rename(tmp, dest, ec);
      if (ec) {
        cleanup();
        throw Error(ErrorCode::io, "cannot write " + dest.string() + ": " + ec.message());
      }
    }
    for (const auto& [path, content] : files_) {
      if (path.empty() || path == "-") out << content;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string document_kind(std::string_view content) {
  try {
    return xml::parse(content).name;
  } catch (const Error&) {
    return {};
  }
}

vxpl::MenuTree linked(const vxpl::Document& doc) {
  auto linked = vxpl::link_and_validate(doc);
  if (!linked.ok()) {
    std::string msg;
    for (const auto& d : linked.diagnostics) msg += (msg.empty() ? "" : "\n") + d;
    throw Error(ErrorCode::validation, msg);
  }
  return std::move(*linked.tree);
}

void print_diagnostics(std::ostream& err, const std::vector<std::string>& diags) {
  for (const auto& d : diags) err << "warning: " << d << '\n';
}

struct Loaded {
  engine::Machine machine;
  std::string document;
  nlohmann::json tree;
};

// Machine from either a VoiceXML file or a VXPL file (transcoded on the fly).
Loaded load_dialog(const Config& cfg, std::ostream& err) {
  const std::string content = read_file(cfg.input);
  if (document_kind(content) == "root") {
    auto parsed = vxpl::parse(content);
    print_diagnostics(err, parsed.diagnostics);
    auto tree = linked(parsed.document);
    std::string vxml = vxml::emit_voicexml(vxml::transcode(tree, {!cfg.no_numbering}));
    auto machine = engine::load_machine(vxml);
    return {std::move(machine), std::move(vxml), tree_json(tree)};
  }
  auto machine = engine::load_machine(content);
  auto tree = tree_json(engine::static_tree(machine));
  return {std::move(machine), content, std::move(tree)};
}

int cmd_transcode(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto html = text::sanitize_utf8(read_file(cfg.input));
  const auto program = annotate::parse_annotation_file(read_file(cfg.annotations));
  const auto parsed = dom::parse_markup(html);
  auto extraction = annotate::apply_annotations(
      program, parsed.root, cfg.lenient ? annotate::Strictness::lenient : annotate::Strictness::strict);
  print_diagnostics(err, extraction.diagnostics);
  const auto tree = linked(extraction.document);
  const auto doc = vxml::transcode(tree, {!cfg.no_numbering});
  Outputs outputs;
  if (!cfg.emit_vxpl.empty()) outputs.add(cfg.emit_vxpl, vxpl::serialize(extraction.document));
  outputs.add(cfg.output, vxml::emit_voicexml(doc));
  outputs.commit(out);
  return kExitOk;
}

int cmd_vxpl2vxml(const Config& cfg, std::ostream& out, std::ostream& err) {
  auto parsed = vxpl::parse(read_file(cfg.input));
  print_diagnostics(err, parsed.diagnostics);
  const auto tree = linked(parsed.document);
  Outputs outputs;
  outputs.add(cfg.output, vxml::emit_voicexml(vxml::transcode(tree, {!cfg.no_numbering})));
  outputs.commit(out);
  return kExitOk;
}

int cmd_validate(const Config& cfg, std::ostream& out, std::ostream& err) {
  const std::string content = read_file(cfg.input);
  const std::string kind = document_kind(content);
  std::vector<std::string> diags;
  if (kind == "root") {
    auto parsed = vxpl::parse(content);
    diags = parsed.diagnostics;
    auto linked = vxpl::link_and_validate(parsed.document);
    diags.insert(diags.end(), linked.diagnostics.begin(), linked.diagnostics.end());
    if (linked.ok()) {
      try {
        vxml::transcode(*linked.tree, {!cfg.no_numbering});
      } catch (const Error& e) {
        diags.push_back(e.what());
      }
    }
  } else if (kind == "annotations") {
    annotate::parse_annotation_file(content);
  } else {
    auto machine = engine::load_machine(content);
    diags = engine::start(machine).diagnostics;
  }
  for (const auto& d : diags) err << cfg.input << ": " << d << '\n';
  if (!diags.empty()) return kExitDiagnostics;
  out << cfg.input << ": ok\n";
  return kExitOk;
}

int cmd_simulate(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto loaded = load_dialog(cfg, err);
  const auto& m = loaded.machine;
  if (!cfg.script.empty()) {
    const auto transcript = engine::run_script(m, engine::parse_script(read_file(cfg.script)));
    if (cfg.json) {
      nlohmann::json seq = nlohmann::json::array();
      for (std::size_t i = 0; i < transcript.size(); ++i) {
        seq.push_back(snapshot_json(m, transcript[i].state, "s1", i == 0 ? nullptr : &transcript[i].outcome));
      }
      out << seq.dump(2) << '\n';
    } else {
      out << engine::format_transcript(transcript);
    }
    return kExitOk;
  }
  // Interactive: one utterance per input line.
  std::vector<engine::TranscriptEntry> transcript = engine::run_script(m, {});
  out << engine::format_transcript(transcript) << std::flush;
  std::string line;
  while (transcript.back().state.phase != engine::Phase::terminated && std::getline(in, line)) {
    auto r = engine::step(m, transcript.back().state, line);
    transcript.push_back({text::collapse_whitespace(line), r.outcome, r.state});
    out << engine::format_transcript({transcript.back()}) << std::flush;
  }
  return kExitOk;
}

void print_static(std::ostream& out, const engine::StaticNode& n, int depth) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << (n.label.empty() ? n.id : n.label);
  if (n.repeated) out << " (repeated)";
  out << '\n';
  for (const auto& c : n.children) print_static(out, c, depth + 1);
}

int cmd_tree(const Config& cfg, std::ostream& out, std::ostream& err) {
  const std::string content = read_file(cfg.input);
  if (document_kind(content) == "root") {
    auto parsed = vxpl::parse(content);
    print_diagnostics(err, parsed.diagnostics);
    out << vxpl::render_levels(linked(parsed.document));
  } else {
    print_static(out, engine::static_tree(engine::load_machine(content)), 0);
  }
  return kExitOk;
}

int cmd_serve(const Config& cfg, std::ostream& out, std::ostream& err) {
  int port = kDefaultPort;
  if (cfg.port) {
    port = *cfg.port;
  } else if (const char* env = std::getenv(kPortEnv); env != nullptr && *env != '\0') {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::usage, std::string(kPortEnv) + "=\"" + env + "\" is not a port number");
    }
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::usage, "port out of range: " + std::to_string(port));
  auto loaded = load_dialog(cfg, err);
  SessionService service(std::move(loaded.machine), std::move(loaded.document), std::move(loaded.tree));
  const auto bound = service.bind(cfg.host, port);
  if (!bound) throw Error(ErrorCode::io, "cannot listen on " + cfg.host + ":" + std::to_string(port));
  out << "serving on http://" << cfg.host << ":" << *bound << std::endl;
  service.listen();
  return kExitOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return kExitIo;
    case ErrorCode::usage: return kExitUsage;
    default: return kExitDiagnostics;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Annotation-driven HTML to VoiceXML transcoder and dialog simulator", "vxt"};
  app.require_subcommand(1);
  Config cfg;

  auto* transcode = app.add_subcommand("transcode", "HTML + annotations -> VXPL -> VoiceXML");
  transcode->add_option("html", cfg.input, "HTML page")->required();
  transcode->add_option("--annotations,-a", cfg.annotations, "annotation file")->required();
  transcode->add_option("--emit-vxpl", cfg.emit_vxpl, "also write the intermediate VXPL here");
  transcode->add_option("-o,--output", cfg.output, "VoiceXML output (default stdout)");
  transcode->add_flag("--lenient", cfg.lenient, "skip directives whose paths match nothing");
  transcode->add_flag("--no-numbering", cfg.no_numbering, "do not number headline choices");

  auto* vxpl2vxml = app.add_subcommand("vxpl2vxml", "VXPL -> VoiceXML");
  vxpl2vxml->add_option("vxpl", cfg.input, "VXPL file")->required();
  vxpl2vxml->add_option("-o,--output", cfg.output, "VoiceXML output (default stdout)");
  vxpl2vxml->add_flag("--no-numbering", cfg.no_numbering, "do not number headline choices");

  auto* validate = app.add_subcommand("validate", "check a VXPL, VoiceXML or annotation file");
  validate->add_option("file", cfg.input, "file to check")->required();
  validate->add_flag("--no-numbering", cfg.no_numbering, "check grammar collisions without numbering");

  auto* simulate = app.add_subcommand("simulate", "run a dialog interactively or from a script");
  simulate->add_option("file", cfg.input, "VoiceXML or VXPL file")->required();
  simulate->add_option("--script", cfg.script, "utterances, one per line");
  simulate->add_flag("--json", cfg.json, "print session snapshots instead of the transcript")->needs("--script");
  simulate->add_flag("--no-numbering", cfg.no_numbering, "when transcoding VXPL input");

  auto* tree = app.add_subcommand("tree", "print the menu structure by level");
  tree->add_option("file", cfg.input, "VXPL or VoiceXML file")->required();

  auto* serve = app.add_subcommand("serve", "HTTP session service for the dialog tester");
  serve->add_option("file", cfg.input, "VoiceXML or VXPL file")->required();
  serve->add_option("--port,-p", cfg.port, "port (default 7455, or $VXT_PORT)");
  serve->add_option("--host", cfg.host, "address to bind");
  serve->add_flag("--no-numbering", cfg.no_numbering, "when transcoding VXPL input");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "vxt: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (transcode->parsed()) return cmd_transcode(cfg, out, err);
    if (vxpl2vxml->parsed()) return cmd_vxpl2vxml(cfg, out, err);
    if (validate->parsed()) return cmd_validate(cfg, out, err);
    if (simulate->parsed()) return cmd_simulate(cfg, in, out, err);
    if (tree->parsed()) return cmd_tree(cfg, out, err);
    if (serve->parsed()) return cmd_serve(cfg, out, err);
  } catch (const Error& e) {
    const std::string_view what = e.what();
    const std::string_view code = to_string(e.code());
    err << "vxt: ";
    if (!what.starts_with(code)) err << code << ": ";
    err << what << '\n';
    return exit_code(e.code());
  }
  return kExitUsage;
}

}  // namespace vxt::cli
