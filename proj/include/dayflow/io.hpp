#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dayflow/actions.hpp"
#include "dayflow/groups.hpp"
#include "dayflow/measures.hpp"
#include "dayflow/solver.hpp"
#include "dayflow/test_function.hpp"

namespace dayflow::io {

using json = nlohmann::json;

// {"kind": "integers", "dim": d} | {"kind": "cyclic", "order": n}
// | {"kind": "symmetric", "n": n} | {"kind": "free_group", "rank": k}
// | {"kind": "heisenberg"} | {"kind": "lamplighter"} | {"kind": "naturals"}
// | {"kind": "direct_product", "factors": [...]}
GroupSpec group_from_json(const json& j);
json group_to_json(const GroupSpec& group);

// Free group elements are strings over a,A,b,B,... ("" is the identity),
// lamplighter elements are {"position": p, "lamps": [...]}, direct product
// elements are arrays of factor elements, everything else is an integer array.
json element_to_json(const GroupSpec& group, const Element& g);
Element element_from_json(const GroupSpec& group, const json& j);

// [{"element": ..., "weight": w}, ...] sorted by element. Entries with
// |w| <= prune are dropped; prune = 0 keeps everything.
json measure_to_json(const MolecularMeasure& mu, double prune = 0.0);
MolecularMeasure measure_from_json(const GroupSpec& group, const json& j);

// {"default": r, "values": [{"element": ..., "value": r}, ...]}
json function_to_json(const TestFunction& f);
TestFunction function_from_json(const GroupSpec& group, const json& j);

// {"dimension": n, "generators": {"a": {"A": [[...]], "b": [...]}, ...},
//  "domain": {"type": "ball" | "box" | "hull" | "simplex", ...}}
// or {"canonical": true} for the simplex action of a finite group.
AffineAction action_from_json(const GroupSpec& group, const json& j, std::uint64_t seed = 0);
json action_to_json(const AffineAction& action);

json report_to_json(const DefectReport& report, const GroupSpec& group, const DefectKind& kind);

// 17 significant digits, '.' decimal point.
std::string format_real(double x);

// Throws InvalidArgument when the file is missing or not valid JSON.
json read_json_file(const std::filesystem::path& path);

}  // namespace dayflow::io
