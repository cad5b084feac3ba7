#pragma once

#include <string>

#include "optree/harness.hpp"

namespace optree {

/// Regret chart: x = evaluation index, y = mean log10 regret with a +-1 std
/// band per algorithm. Values are clamped at kLogRegretFloor, which is drawn
/// as a dashed line when the data reaches it.
std::string render_regret_svg(const CurveSummary& summary);

}  // namespace optree
