#pragma once

// Versioned JSON serialization of verification, density and coverage runs.
// Output is deterministic: keys keep insertion order and no timing data is
// recorded.

#include <string>

#include <json.hpp>

#include "hdef/eval.hpp"
#include "hdef/residue.hpp"
#include "hdef/uniform.hpp"

namespace hdef {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

Json to_json(const CoverageRecord& r);
Json to_json(const SoundnessCert& c);
Json to_json(const RefuteRecord& r);
Json to_json(const VerifyReport& r);
Json to_json(const DensityReport& r);
Json to_json(const UniformVerdict& v, const LocalField& K);
Json to_json(const QuadraticSweep& s);
/// Formula with its structural summary.
Json synth_json(const std::string& id, const Formula& f);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace hdef
