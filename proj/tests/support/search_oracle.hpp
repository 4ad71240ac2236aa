#pragma once

#include "wotforge/core/model.hpp"
#include "wotforge/store/search.hpp"

#include <random>
#include <vector>

namespace wotforge::testing {

/// Linear scan over every record, re-tokenizing each field per query.
/// Records must carry their current stats.
store::SearchResult brute_force_search(const std::vector<ProjectRecord>& corpus,
                                       const store::SearchQuery& query,
                                       const store::SearchWeights& weights = {});

/// Random project over a small vocabulary so that terms collide across
/// names, tags and descriptions.
ProjectRecord random_project(std::mt19937& rng);

/// Random query: 0-3 vocabulary terms (sometimes a miss), random filters,
/// limit and offset.
store::SearchQuery random_query(std::mt19937& rng);

} // namespace wotforge::testing
