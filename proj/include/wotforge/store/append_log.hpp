#pragma once

#include "wotforge/core/json.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace wotforge::store {

class StoreError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Newline-delimited JSON file opened for appending. A torn final line
/// (no trailing newline) is cut off when the log is opened.
class AppendLog {
public:
  AppendLog(std::filesystem::path path, bool sync);
  ~AppendLog();
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(const Json& entry);
  void truncate();

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  int fd_ = -1;
  bool sync_;
};

/// Parses every complete line. Throws StoreError on a corrupt line that is
/// not the torn tail. Missing file yields an empty list.
std::vector<Json> read_entries(const std::filesystem::path& path);

/// Writes entries to path.tmp, syncs, then renames over path.
void write_snapshot(const std::filesystem::path& path, const std::vector<Json>& entries, bool sync);

} // namespace wotforge::store
