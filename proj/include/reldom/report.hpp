#pragma once

#include <string>

#include <json.hpp>

#include "reldom/matrix_lemmas.hpp"
#include "reldom/linalg.hpp"

namespace reldom::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

// Pretty JSON with doubles printed as %.17g; NaN and infinities become null.
std::string dump(const Json& j, int indent = 2);
// Writes dump(j) plus a trailing newline; "-" or "" means stdout.
void emit(const Json& j, const std::string& path);

Json to_json(const linalg::BoundCheck& c);
Json to_json(const linalg::BoundReport& r);
Json to_json(const linalg::Matrix& m);
Json to_json(const linalg::Vector& v);

}  // namespace reldom::report
