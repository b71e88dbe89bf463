#pragma once

#include "twoorbit/chevalley.hpp"
#include "twoorbit/classify.hpp"

#include <json.hpp>

#include <string>

namespace twoorbit {

/// {"toral": {"kind": "full" | "kernel", "functionals": [[q...]]},
///  "root_spaces": [[q...]], "mixed": [[{"root": [q...], "coeff": "p/q"}]]}
/// with ambient coordinates written as rational strings. Unknown mixed
/// coefficients are written as null.
nlohmann::json spec_to_json(const RootSystem& phi, const SubalgebraSpec& h);

/// Inverse of spec_to_json. Throws std::invalid_argument on malformed input
/// or vectors that are not roots of phi.
SubalgebraSpec spec_from_json(const RootSystem& phi, const nlohmann::json& j);

/// The spec fields plus "group", "kind", "provenance" and "checks".
nlohmann::json pair_to_json(const RootSystem& phi, const ClassifiedPair& p);

nlohmann::json group_to_json(const RootSystem& phi);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace twoorbit
