#pragma once

#include "normlab/discretize.hpp"
#include "normlab/frames.hpp"
#include "normlab/stepfn.hpp"

#include <string>

namespace normlab {

/// Step functions serialize to {"breakpoints": [...], "values": [...],
/// "backend": "exact" | "float64"}; exact scalars ride as "p/q" strings to
/// stay bit-exact, float64 scalars as JSON numbers. Spaces without geometry
/// use a "weights" array instead of breakpoints.
std::string stepfn_to_json(const StepFunction& f);
StepFunction stepfn_from_json(const std::string& text);

/// One rational (or decimal) per line.
std::string sampling_to_text(const SamplingSet& s);
SamplingSet sampling_from_text(const std::string& text);

/// {"dim": N, "weights": [...], "vectors": [[...], ...]}.
std::string frame_to_json(const FiniteFrame& f);
FiniteFrame frame_from_json(const std::string& text);

/// {"p": ..., "A": {"value","kind","witness"}, "B": {...}, "valid", "M",
/// "family"}; every scalar carries its backend tag.
std::string report_to_json(const DiscretizationReport& r);

}  // namespace normlab
