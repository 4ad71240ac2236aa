#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wotforge::testing {

/// A complete, valid "code" submission modelled on the MeArm Pi robot arm.
nlohmann::json mearm_submission();

/// A complete, valid "template" submission (no github) whose TD carries
/// a {{BASE_URL}} placeholder.
nlohmann::json hue_template_submission();

/// A TD template whose hrefs start with {{BASE_URL}}.
nlohmann::json base_url_td();

/// Repeats a (possibly multibyte) unit n times.
std::string repeat(const std::string& unit, std::size_t n);

struct LabeledDoc {
  std::string label;
  nlohmann::json doc;
};

/// Deterministic corpus of project submissions: valid documents, length
/// boundaries (4/5, 180/181, 499/500/501), enum misspellings, duplicates,
/// missing fields, bad URIs, unexpected members and random combinations.
std::vector<LabeledDoc> submission_corpus(std::uint32_t seed, std::size_t random_cases);

} // namespace wotforge::testing
