#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vxt/engine.hpp"
#include "vxt/vxpl.hpp"

namespace vxt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kDefaultPort = 7455;
inline constexpr const char* kPortEnv = "VXT_PORT";

/// Entry point of the vxt tool; args excludes the program name. `in` feeds
/// interactive simulation.
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Wire form of a session: sessionId, currentId, prompt, choices[{label,
/// tokens}], navStack, terminated, plus outcome/outcomeKind after a turn.
nlohmann::json snapshot_json(const engine::Machine& machine, const engine::DialogState& state,
                             const std::string& session_id, const engine::Outcome* outcome = nullptr);

nlohmann::json tree_json(const vxpl::MenuTree& tree);
nlohmann::json tree_json(const engine::StaticNode& node);

/// In-memory session service over one immutable machine.
class SessionService {
 public:
  SessionService(engine::Machine machine, std::string document, nlohmann::json tree);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  /// Bind to host:port (0 picks a free port). Returns the bound port, or
  /// nullopt when the address is unavailable.
  std::optional<int> bind(const std::string& host, int port);
  /// Serve until stop(); call after a successful bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vxt::cli
