#pragma once

#include "wotforge/core/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace wotforge::store {

inline constexpr std::size_t kDefaultLimit = 20;
inline constexpr std::size_t kMaxLimit = 100;

struct SearchWeights {
  std::uint64_t name = 3;
  std::uint64_t tags = 2;
  std::uint64_t short_description = 1;
  std::uint64_t long_description = 1;
};

struct SearchQuery {
  std::vector<std::string> terms; // lowercase tokens
  std::optional<Platform> platform;
  std::optional<Topic> topic;
  std::optional<ImplementationType> implementation_type;
  std::optional<Complexity> complexity;
  std::size_t limit = kDefaultLimit;
  std::size_t offset = 0;

  /// Terms taken from free text via the tokenizer.
  static SearchQuery from_text(std::string_view text);
};

struct SearchHit {
  std::string project_id;
  std::string name;
  std::string short_description;
  ImplementationType implementation_type = ImplementationType::Template;
  Platform platform = Platform::Other;
  std::uint64_t score = 0;
  std::uint64_t downloads = 0;
  std::optional<double> average_rating;

  bool operator==(const SearchHit&) const = default;
};

struct SearchResult {
  std::vector<SearchHit> hits;
  std::size_t total = 0; // matches before pagination
};

/// (score desc, downloads desc, name asc, id asc).
bool hit_order(const SearchHit& a, const SearchHit& b);

Json to_json(const SearchHit& hit);

/// Which fields of a project contain a token.
enum FieldMask : std::uint8_t {
  kInName = 1,
  kInTags = 2,
  kInShortDescription = 4,
  kInLongDescription = 8,
};

std::uint64_t field_score(std::uint8_t mask, const SearchWeights& weights);

/// term -> (project id -> fields containing the term).
class InvertedIndex {
public:
  using Postings = std::unordered_map<std::string, std::uint8_t>;

  void add(const std::string& id, const ProjectRecord& record);
  void remove(const std::string& id);

  /// nullptr when the term occurs nowhere.
  const Postings* postings(const std::string& term) const;

  std::size_t term_count() const { return postings_.size(); }

private:
  std::unordered_map<std::string, Postings> postings_;
  std::unordered_map<std::string, std::vector<std::string>> terms_by_id_;
};

} // namespace wotforge::store
