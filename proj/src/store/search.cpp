#include "wotforge/store/search.hpp"

#include "wotforge/store/tokenizer.hpp"

#include <algorithm>
#include <tuple>

namespace wotforge::store {

SearchQuery SearchQuery::from_text(std::string_view text) {
  SearchQuery q;
  q.terms = tokenize(text);
  return q;
}

bool hit_order(const SearchHit& a, const SearchHit& b) {
  return std::tie(b.score, b.downloads, a.name, a.project_id) <
         std::tie(a.score, a.downloads, b.name, b.project_id);
}

Json to_json(const SearchHit& hit) {
  Json doc{{"projectId", hit.project_id},
           {"name", hit.name},
           {"shortDescription", hit.short_description},
           {"implementationType", to_string(hit.implementation_type)},
           {"platform", to_string(hit.platform)},
           {"score", hit.score},
           {"downloads", hit.downloads}};
  if (hit.average_rating) doc["averageRating"] = *hit.average_rating;
  return doc;
}

std::uint64_t field_score(std::uint8_t mask, const SearchWeights& w) {
  std::uint64_t score = 0;
  if (mask & kInName) score += w.name;
  if (mask & kInTags) score += w.tags;
  if (mask & kInShortDescription) score += w.short_description;
  if (mask & kInLongDescription) score += w.long_description;
  return score;
}

void InvertedIndex::add(const std::string& id, const ProjectRecord& record) {
  remove(id);
  std::unordered_map<std::string, std::uint8_t> masks;
  auto mark = [&](std::string_view text, std::uint8_t bit) {
    for (auto& token : tokenize(text)) masks[std::move(token)] |= bit;
  };
  mark(record.name, kInName);
  for (const auto& tag : record.tags) mark(tag, kInTags);
  mark(record.short_description, kInShortDescription);
  mark(record.long_description, kInLongDescription);

  auto& terms = terms_by_id_[id];
  for (auto& [term, mask] : masks) {
    postings_[term][id] = mask;
    terms.push_back(term);
  }
}

void InvertedIndex::remove(const std::string& id) {
  auto it = terms_by_id_.find(id);
  if (it == terms_by_id_.end()) return;
  for (const auto& term : it->second) {
    auto p = postings_.find(term);
    if (p == postings_.end()) continue;
    p->second.erase(id);
    if (p->second.empty()) postings_.erase(p);
  }
  terms_by_id_.erase(it);
}

const InvertedIndex::Postings* InvertedIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

} // namespace wotforge::store
