#include "wotforge/cli/archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

namespace wotforge::cli {

namespace {

constexpr std::size_t kBlock = 512;

std::string_view field(std::string_view header, std::size_t offset, std::size_t length) {
  auto f = header.substr(offset, length);
  auto nul = f.find('\0');
  return nul == std::string_view::npos ? f : f.substr(0, nul);
}

std::uint64_t octal(std::string_view header, std::size_t offset, std::size_t length) {
  auto f = header.substr(offset, length);
  if (!f.empty() && (static_cast<unsigned char>(f[0]) & 0x80)) {
    // GNU base-256 for sizes beyond 8 GiB
    std::uint64_t value = static_cast<unsigned char>(f[0]) & 0x7f;
    for (std::size_t i = 1; i < f.size(); ++i) value = (value << 8) | static_cast<unsigned char>(f[i]);
    return value;
  }
  std::uint64_t value = 0;
  for (char c : f) {
    if (c == ' ' || c == '\0') {
      if (value != 0) break;
      continue;
    }
    if (c < '0' || c > '7') throw ArchiveError("corrupt tar header: bad octal field");
    value = value * 8 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

bool checksum_ok(std::string_view header) {
  auto expected = octal(header, 148, 8);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < kBlock; ++i) {
    sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(header[i]);
  }
  return sum == expected;
}

/// pax records: "<len> key=value\n"...
std::map<std::string, std::string> parse_pax(std::string_view data) {
  std::map<std::string, std::string> out;
  while (!data.empty()) {
    auto space = data.find(' ');
    if (space == std::string_view::npos) throw ArchiveError("corrupt pax header");
    std::size_t length = 0;
    auto [end, ec] = std::from_chars(data.data(), data.data() + space, length);
    if (ec != std::errc{} || length <= space + 1 || length > data.size()) {
      throw ArchiveError("corrupt pax header");
    }
    auto record = data.substr(space + 1, length - space - 2);
    auto eq = record.find('=');
    if (eq != std::string_view::npos) out[std::string(record.substr(0, eq))] = std::string(record.substr(eq + 1));
    data.remove_prefix(length);
  }
  return out;
}

/// Normalizes a member name; nullopt for names to ignore ("." itself).
std::optional<std::string> safe_path(std::string_view name) {
  if (!name.empty() && name.front() == '/') throw ArchiveError("absolute path in archive: " + std::string(name));
  std::string out;
  std::size_t start = 0;
  while (start <= name.size()) {
    auto slash = name.find('/', start);
    auto part = name.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    if (part == "..") throw ArchiveError("path escapes the archive root: " + std::string(name));
    if (!part.empty() && part != ".") {
      if (!out.empty()) out += '/';
      out += part;
    }
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

/// True when the link target, resolved from the entry's directory, stays inside the tree.
bool link_stays_inside(const std::string& entry_path, const std::string& target) {
  if (target.empty() || target.front() == '/') return false;
  int depth = static_cast<int>(std::count(entry_path.begin(), entry_path.end(), '/'));
  std::size_t start = 0;
  while (start <= target.size()) {
    auto slash = target.find('/', start);
    auto part = target.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (part == "..") {
      if (--depth < 0) return false;
    } else if (!part.empty() && part != ".") {
      ++depth;
    }
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return true;
}

} // namespace

std::string gunzip(std::string_view compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw ArchiveError("zlib initialisation failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::string out;
  char buffer[64 * 1024];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof buffer;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      std::string message = zs.msg ? zs.msg : "truncated or corrupt stream";
      inflateEnd(&zs);
      throw ArchiveError("gzip: " + message);
    }
    out.append(buffer, sizeof buffer - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw ArchiveError("gzip: truncated stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::vector<ArchiveEntry> read_tar(std::string_view tar) {
  std::vector<ArchiveEntry> entries;
  std::optional<std::string> long_name, long_link;
  std::map<std::string, std::string> pax;
  std::size_t pos = 0;

  while (pos + kBlock <= tar.size()) {
    auto header = tar.substr(pos, kBlock);
    if (std::all_of(header.begin(), header.end(), [](char c) { return c == '\0'; })) break;
    if (!checksum_ok(header)) throw ArchiveError("corrupt tar header at offset " + std::to_string(pos));
    auto size = octal(header, 124, 12);
    char type = header[156];
    pos += kBlock;
    if (size > tar.size() - pos) throw ArchiveError("tar member runs past the end of the archive");
    auto data = tar.substr(pos, size);
    pos += (size + kBlock - 1) / kBlock * kBlock;

    switch (type) {
    case 'L': long_name = std::string(field(data, 0, data.size())); continue;
    case 'K': long_link = std::string(field(data, 0, data.size())); continue;
    case 'x': pax = parse_pax(data); continue;
    case 'g': continue; // global pax header, e.g. the commit id in GitHub archives
    default: break;
    }

    std::string name;
    if (auto it = pax.find("path"); it != pax.end()) {
      name = it->second;
    } else if (long_name) {
      name = *long_name;
    } else {
      name = std::string(field(header, 0, 100));
      auto prefix = field(header, 345, 155);
      if (field(header, 257, 5) == "ustar" && !prefix.empty()) name = std::string(prefix) + "/" + name;
    }
    std::string link;
    if (auto it = pax.find("linkpath"); it != pax.end()) {
      link = it->second;
    } else if (long_link) {
      link = *long_link;
    } else {
      link = std::string(field(header, 157, 100));
    }
    long_name.reset();
    long_link.reset();
    pax.clear();

    auto path = safe_path(name);
    if (!path) continue;
    ArchiveEntry entry;
    entry.path = *path;
    entry.mode = static_cast<unsigned>(octal(header, 100, 8)) & 0777;
    if (type == '0' || type == '\0' || type == '7') {
      entry.type = EntryType::File;
      entry.data = std::string(data);
    } else if (type == '5') {
      entry.type = EntryType::Directory;
    } else if (type == '2') {
      entry.type = EntryType::Symlink;
      entry.link = link;
    } else {
      continue;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void strip_top_level(std::vector<ArchiveEntry>& entries) {
  if (entries.empty()) return;
  auto root_of = [](const std::string& p) { return p.substr(0, p.find('/')); };
  auto root = root_of(entries.front().path);
  for (const auto& e : entries) {
    if (root_of(e.path) != root) return;
    if (e.path == root && e.type != EntryType::Directory) return;
  }
  std::vector<ArchiveEntry> kept;
  for (auto& e : entries) {
    if (e.path == root) continue;
    e.path = e.path.substr(root.size() + 1);
    kept.push_back(std::move(e));
  }
  entries = std::move(kept);
}

SourceArchive SourceArchive::from_tar_gz(std::string_view bytes) {
  SourceArchive archive;
  archive.entries_ = read_tar(gunzip(bytes));
  strip_top_level(archive.entries_);
  return archive;
}

std::optional<std::string> SourceArchive::read_file(std::string_view path) const {
  for (const auto& e : entries_) {
    if (e.path == path && e.type == EntryType::File) return e.data;
  }
  return std::nullopt;
}

void SourceArchive::extract_to(const std::filesystem::path& root) const {
  namespace fs = std::filesystem;
  for (const auto& e : entries_) {
    if (e.type == EntryType::Symlink && !link_stays_inside(e.path, e.link)) {
      throw ArchiveError("symlink points outside the source tree: " + e.path + " -> " + e.link);
    }
  }
  for (const auto& e : entries_) {
    auto target = root / fs::path(e.path);
    switch (e.type) {
    case EntryType::Directory:
      fs::create_directories(target);
      break;
    case EntryType::File: {
      fs::create_directories(target.parent_path());
      if (fs::is_symlink(fs::symlink_status(target))) fs::remove(target);
      std::ofstream out(target, std::ios::binary | std::ios::trunc);
      out.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
      if (!out) throw ArchiveError("cannot write " + target.string());
      out.close();
      fs::permissions(target, static_cast<fs::perms>(e.mode | 0600), fs::perm_options::replace);
      break;
    }
    case EntryType::Symlink:
      fs::create_directories(target.parent_path());
      fs::remove(target);
      fs::create_symlink(e.link, target);
      break;
    }
  }
}

} // namespace wotforge::cli
