#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace wotforge::cli {

/// Seam for everything the CLI executes. Production uses PosixRunner;
/// tests inject recorders.
class CommandRunner {
public:
  virtual ~CommandRunner() = default;
  /// Runs a shell command line. Returns its exit status; 128+N when
  /// killed by signal N; 127 when it could not be started.
  virtual int run(const std::string& command, const std::filesystem::path& cwd,
                  const std::map<std::string, std::string>& extra_env) = 0;
};

/// /bin/sh -c <command>, inheriting stdio and the environment.
class PosixRunner final : public CommandRunner {
public:
  int run(const std::string& command, const std::filesystem::path& cwd,
          const std::map<std::string, std::string>& extra_env) override;
};

} // namespace wotforge::cli
