#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "qtails/registry.hpp"

namespace qtails::report {

enum class Format { text, json, csv, markdown };

/// Parses "text", "json", "csv" or "markdown"; throws DomainError otherwise.
Format parse_format(std::string_view name);

/// Exact rendering, "p/q" or "p".
std::string rational_string(const Rational &r);

nlohmann::ordered_json to_json(const registry::VerificationReport &r);
nlohmann::ordered_json to_json(const registry::Summary &s);

/// One document for a whole run. `timing` false omits elapsed times from
/// text, CSV and markdown output (JSON always carries them).
std::string render(const registry::Summary &s, Format f, bool timing = true);

} // namespace qtails::report
