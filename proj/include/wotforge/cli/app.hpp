#pragma once

#include "wotforge/cli/config.hpp"
#include "wotforge/cli/runner.hpp"
#include "wotforge/fetch/transport.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace wotforge::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitRegistry = 2,       // registry unreachable or HTTP error
  kExitUnbound = 3,        // TD placeholders left unbound
  kExitProbeFailed = 4,
  kExitNoManifest = 5,     // missing or invalid wotify.json
  kExitTemplateInstall = 6,
  kExitAmbiguous = 7,
};

/// Everything a command touches outside the process, injectable for tests.
struct CliContext {
  std::ostream& out;
  std::ostream& err;
  std::shared_ptr<CommandRunner> runner;
  /// Source archive downloads.
  std::shared_ptr<fetch::HttpTransport> transport;
  EnvLookup env = process_env;
  /// Asked before install scripts run; empty means proceed without asking.
  std::function<bool(const std::string& question)> confirm;
};

/// Runs `wotify <args...>` (args exclude the program name).
int run_cli(const std::vector<std::string>& args, CliContext& ctx);

} // namespace wotforge::cli
