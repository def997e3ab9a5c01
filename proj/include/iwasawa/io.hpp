#pragma once

// JSON and CSV formats for modules, skeletons and reports.
//
// A module file is a JSON object
//   { "p": 3, "precision_p": 6, "precision_x": 32, "u0": 4, "generators": 2,
//     "relations": [ [[0, 1], [-3]] ],
//     "flags": { "no_finite_submodule": "certified", "elementary_iso": "unknown" } }
// where each relation lists one little-endian coefficient array per
// generator. "u0" and "flags" are optional.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "iwasawa/harness.hpp"
#include "iwasawa/module.hpp"

namespace iwasawa::io {

PresentedModule parse_module(std::string_view text);
PresentedModule load_module(const std::filesystem::path& path);
/// Canonical text: residues in [0, p^N), trailing zeros trimmed, u0 and flags
/// always written. parse_module(serialize_module(m)) == m.
std::string serialize_module(const PresentedModule& m);

/// Skeleton file: "label", "module" (inline module object, or a path relative
/// to base_dir), "local_lambdas", "expected_corank", optional "ck_lambda".
SelmerSkeleton parse_skeleton(std::string_view text, const std::filesystem::path& base_dir = {});
SelmerSkeleton load_skeleton(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

using Json = nlohmann::ordered_json;

Json to_json(const InvariantReport& report);
Json to_json(const GrowthTrace& trace);
/// Deterministic: the runtime is left out.
Json to_json(const SuiteReport& report);
Json to_json(const RingParams& params);

/// Rows n,pn,e,delta with delta_0 = e_0.
std::string growth_csv(const GrowthTrace& trace);
/// Two-space indented, newline terminated.
std::string dump(const Json& value);

}  // namespace iwasawa::io
