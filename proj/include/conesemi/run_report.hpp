#pragma once

// Rendering of module reports for the command-line tool: a JSON document that
// follows schemas/run-report.schema.json and an indented text form.

#include <json.hpp>

#include <string>

#include "conesemi/report.hpp"

namespace conesemi {

inline constexpr const char* kToolVersion = "0.1.0";

/// Non-finite numbers become null.
nlohmann::json number_json(double v);
nlohmann::json vector_json(const Vector& v);
nlohmann::json report_to_json(const Report& r);

/// Verdict line, margins, notes and witnesses; parts are indented below.
std::string report_to_text(const Report& r, int indent = 0);

}  // namespace conesemi
