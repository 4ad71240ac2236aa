#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wotforge::cli {

class ArchiveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class EntryType { File, Directory, Symlink };

struct ArchiveEntry {
  std::string path; // relative, '/'-separated, no "." or ".." components
  EntryType type = EntryType::File;
  std::string data;      // file contents
  std::string link;      // symlink target
  unsigned mode = 0644;
};

/// gzip (or zlib) stream to raw bytes. Throws ArchiveError.
std::string gunzip(std::string_view compressed);

/// ustar/pax/GNU tar. Hard links, devices and FIFOs are skipped; unsafe
/// paths (absolute, "..") throw ArchiveError.
std::vector<ArchiveEntry> read_tar(std::string_view tar);

/// Drops the single top-level directory forge archives wrap the tree in.
/// Leaves the entries alone when there is no single common root.
void strip_top_level(std::vector<ArchiveEntry>& entries);

/// An in-memory source tree, as downloaded.
class SourceArchive {
public:
  /// gzip-compressed tar; the forge's wrapper directory is stripped.
  static SourceArchive from_tar_gz(std::string_view bytes);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::optional<std::string> read_file(std::string_view path) const;

  /// Writes the tree under root, which must exist. Symlinks that would
  /// point outside root are rejected.
  void extract_to(const std::filesystem::path& root) const;

private:
  std::vector<ArchiveEntry> entries_;
};

} // namespace wotforge::cli
