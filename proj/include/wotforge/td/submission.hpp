#pragma once

#include "wotforge/core/json.hpp"
#include "wotforge/core/model.hpp"
#include "wotforge/core/validation_report.hpp"

#include <variant>

namespace wotforge::td {

/// Full ingestion pipeline shared by the registry and the CLI:
/// schema validation, TD structure (placeholders tolerated), canonicalize,
/// and a re-check of the canonical form. Returns the canonical record or
/// the report explaining the rejection.
std::variant<ProjectRecord, ValidationReport> ingest_submission(const Json& doc);

} // namespace wotforge::td
