#pragma once

#include <cstddef>
#include <vector>

#include "optree/common.hpp"

namespace optree {

/// One true objective evaluation.
struct EvalRecord {
    std::size_t t = 0;  // evaluation index, 1-based
    std::size_t n = 0;  // expansions so far
    std::size_t N = 0;  // confidence-bound evaluations so far
    Point x;
    double f = 0.0;
    double best_so_far = 0.0;  // best true evaluation up to and including t
    double wall_s = 0.0;       // seconds since the run started

    bool operator==(const EvalRecord&) const = default;
};

struct RunTrace {
    std::vector<EvalRecord> records;
    Point best_x;
    double best_f = 0.0;

    std::size_t expansions = 0;
    std::size_t tree_nodes = 0;
    std::size_t bound_checks = 0;

    std::size_t evaluations() const noexcept { return records.size(); }
};

/// Byte-comparable rendering of the trace without wall-clock fields.
std::string trace_fingerprint(const RunTrace& trace);

}  // namespace optree
