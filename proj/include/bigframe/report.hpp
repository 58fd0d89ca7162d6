#pragma once

#include <string>

#include "bigframe/core.hpp"
#include "bigframe/stability.hpp"
#include "bigframe/verify.hpp"

namespace bigframe {

/// %.12g with "inf"/"nan" spelled out; deterministic across runs.
std::string format_value(double v);

/// Human summary followed (machine = true) by a fixed-order key=value block.
std::string emit_report(const ClassificationReport& rep, bool machine);

/// Bounds-only view: just the A_opt / B_opt pair.
std::string emit_bounds_report(const BoundsResult& res, bool machine);

std::string emit_report(const StabilityCertificate& cert, bool machine);

std::string emit_report(const SuiteResult& suite, bool machine);

}  // namespace bigframe
