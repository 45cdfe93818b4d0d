#include <mutex>
#include <unordered_map>

#include <httplib.h>

#include "vxt/cli.hpp"
#include "vxt/error.hpp"

namespace vxt::cli {

using nlohmann::json;

namespace {

std::string outcome_kind(engine::Outcome::Kind k) {
  switch (k) {
    case engine::Outcome::prompt: return "prompt";
    case engine::Outcome::no_match: return "no-match";
    case engine::Outcome::terminated: return "terminated";
  }
  return "prompt";
}

json static_node(const engine::StaticNode& n) {
  static const char* kinds[] = {"menu", "record", "leaf"};
  json j{{"id", n.id}, {"kind", kinds[n.kind]}, {"label", n.label}, {"children", json::array()}};
  if (n.repeated) j["repeated"] = true;
  for (const auto& c : n.children) j["children"].push_back(static_node(c));
  return j;
}

json vxpl_node(const vxpl::MenuTree& tree, std::size_t i) {
  const auto& e = tree.element(i);
  json j{{"kind", std::string(vxpl::kind_name(e))}, {"depth", tree.node(i).depth}};
  if (const auto* m = std::get_if<vxpl::Menu>(&e)) {
    j["id"] = m->id;
    j["label"] = m->prompt;
    if (m->promote) j["promote"] = true;
  } else if (const auto* item = std::get_if<vxpl::MenuItem>(&e)) {
    j["label"] = item->label;
    j["href"] = item->href;
  } else if (const auto* s = std::get_if<vxpl::Structured>(&e)) {
    j["id"] = s->id;
  } else if (const auto* f = std::get_if<vxpl::Field>(&e)) {
    j["key"] = f->is_key;
    if (f->name) j["name"] = *f->name;
    j["value"] = f->value;
  } else if (const auto* t = std::get_if<vxpl::Text>(&e)) {
    j["content"] = t->content;
  }
  j["children"] = json::array();
  for (auto c : tree.node(i).children) j["children"].push_back(vxpl_node(tree, c));
  return j;
}

json error_body(const std::string& message) { return json{{"error", message}}; }

}  // namespace

json snapshot_json(const engine::Machine& machine, const engine::DialogState& state, const std::string& session_id,
                   const engine::Outcome* outcome) {
  json choices = json::array();
  for (const auto& c : engine::offered_choices(machine, state)) {
    choices.push_back(json{{"label", c.label}, {"tokens", c.tokens}});
  }
  json j{{"sessionId", session_id},
         {"currentId", state.current},
         {"prompt", state.last_prompt},
         {"choices", std::move(choices)},
         {"navStack", state.nav_stack},
         {"terminated", state.phase == engine::Phase::terminated}};
  if (outcome != nullptr) {
    j["outcome"] = outcome->text;
    j["outcomeKind"] = outcome_kind(outcome->kind);
  }
  return j;
}

json tree_json(const vxpl::MenuTree& tree) {
  json j = vxpl_node(tree, tree.root_index());
  json promoted = json::array();
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto* m = std::get_if<vxpl::Menu>(&tree.element(i));
    if (m != nullptr && m->promote && i != tree.root_index()) promoted.push_back(m->id);
  }
  j["promoted"] = std::move(promoted);
  return j;
}

json tree_json(const engine::StaticNode& node) { return static_node(node); }

struct SessionService::Impl {
  engine::Machine machine;
  std::string document;
  json tree;
  httplib::Server server;
  std::mutex mu;
  std::unordered_map<std::string, engine::DialogState> sessions;
  std::size_t next_id = 1;

  void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void routes() {
    // httplib also sets SO_REUSEPORT, which would let a second server share a
    // busy port instead of failing.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
      const auto s = engine::start(machine).state;
      std::lock_guard lock(mu);
      const std::string id = "s" + std::to_string(next_id++);
      sessions[id] = s;
      send(res, 201, snapshot_json(machine, s, id));
    });

    server.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      std::lock_guard lock(mu);
      auto it = sessions.find(id);
      if (it == sessions.end()) return send(res, 404, error_body("unknown session \"" + id + "\""));
      send(res, 200, snapshot_json(machine, it->second, id));
    });

    server.Post(R"(/sessions/([^/]+)/utterance)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      std::string utterance;
      try {
        const json body = json::parse(req.body);
        if (!body.is_object() || !body.contains("utterance") || !body["utterance"].is_string()) {
          return send(res, 400, error_body("body must be {\"utterance\": string}"));
        }
        utterance = body["utterance"].get<std::string>();
      } catch (const json::exception&) {
        return send(res, 400, error_body("body is not valid JSON"));
      }
      std::lock_guard lock(mu);
      auto it = sessions.find(id);
      if (it == sessions.end()) return send(res, 404, error_body("unknown session \"" + id + "\""));
      if (it->second.phase == engine::Phase::terminated) {
        return send(res, 409, error_body("session \"" + id + "\" has terminated; reset it"));
      }
      try {
        auto r = engine::step(machine, it->second, utterance);
        it->second = r.state;
        send(res, 200, snapshot_json(machine, r.state, id, &r.outcome));
      } catch (const Error& e) {
        send(res, 500, error_body(e.what()));
      }
    });

    server.Post(R"(/sessions/([^/]+)/reset)", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      std::lock_guard lock(mu);
      auto it = sessions.find(id);
      if (it == sessions.end()) return send(res, 404, error_body("unknown session \"" + id + "\""));
      it->second = engine::start(machine).state;
      send(res, 200, snapshot_json(machine, it->second, id));
    });

    server.Get("/tree", [this](const httplib::Request&, httplib::Response& res) { send(res, 200, tree); });
    server.Get("/document", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(document, "application/voicexml+xml");
    });
  }
};

SessionService::SessionService(engine::Machine machine, std::string document, json tree)
    : impl_(std::make_unique<Impl>()) {
  impl_->machine = std::move(machine);
  impl_->document = std::move(document);
  impl_->tree = std::move(tree);
  impl_->routes();
}

SessionService::~SessionService() { stop(); }

std::optional<int> SessionService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p <= 0) return std::nullopt;
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) return std::nullopt;
  return port;
}

void SessionService::listen() { impl_->server.listen_after_bind(); }

void SessionService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace vxt::cli
