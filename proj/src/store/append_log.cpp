#include "wotforge/store/append_log.hpp"

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace wotforge::store {

namespace {

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
  throw StoreError(what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_directory(const std::filesystem::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

AppendLog::AppendLog(std::filesystem::path path, bool sync) : path_(std::move(path)), sync_(sync) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail("open", path_);

  // Cut a torn tail so new entries start on a fresh line.
  auto size = std::filesystem::file_size(path_);
  if (size > 0) {
    std::string content = slurp(path_);
    if (content.back() != '\n') {
      auto keep = content.rfind('\n');
      keep = keep == std::string::npos ? 0 : keep + 1;
      if (::ftruncate(fd_, static_cast<off_t>(keep)) != 0) fail("truncate", path_);
    }
  }
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendLog::append(const Json& entry) {
  std::string line = entry.dump() + "\n";
  write_all(fd_, line, path_);
  if (sync_ && ::fdatasync(fd_) != 0) fail("fdatasync", path_);
}

void AppendLog::truncate() {
  if (::ftruncate(fd_, 0) != 0) fail("truncate", path_);
  if (sync_ && ::fsync(fd_) != 0) fail("fsync", path_);
}

std::vector<Json> read_entries(const std::filesystem::path& path) {
  std::vector<Json> entries;
  if (!std::filesystem::exists(path)) return entries;
  std::string content = slurp(path);
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    ++line_no;
    if (end == std::string::npos) break; // torn tail, never acknowledged
    std::string_view line(content.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      entries.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw StoreError("corrupt entry at " + path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return entries;
}

void write_snapshot(const std::filesystem::path& path, const std::vector<Json>& entries, bool sync) {
  auto tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail("open", tmp);
  try {
    std::string buffer;
    for (const auto& entry : entries) {
      buffer += entry.dump();
      buffer += '\n';
    }
    write_all(fd, buffer, tmp);
    if (sync && ::fsync(fd) != 0) fail("fsync", tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::filesystem::rename(tmp, path);
  if (sync) sync_directory(path.parent_path());
}

} // namespace wotforge::store
