#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "optree/common.hpp"
#include "optree/partition.hpp"
#include "optree/trace.hpp"

namespace optree {

struct SooConfig {
    std::size_t budget = 150;   // true objective evaluations
    double hmax_epsilon = 0.5;  // h_max(n) = ceil(n^epsilon)
    std::size_t dim = 1;

    /// Throws std::invalid_argument when out of range.
    void validate() const;
};

/// Depth cap after n expansions: ceil(n^epsilon), with h_max(0) = 1.
int hmax(std::size_t n, double epsilon);

/// Fired right before a leaf is expanded; the tree is in its pre-expansion state.
struct ExpansionEvent {
    std::size_t sweep = 0;
    Tree::NodeId node = 0;
    int level = 0;
    double g = 0.0;
    double nu_max_before = 0.0;
};

using ExpansionObserver = std::function<void(const ExpansionEvent&, const Tree&)>;

struct SooOptions {
    ExpansionObserver on_expand;
    Tree* final_tree = nullptr;  // receives the tree at the end of the run
};

/// Simultaneous optimistic optimization on [0,1]^dim with binary
/// largest-side splits. Deterministic; `seed` is accepted for interface
/// uniformity and ignored.
RunTrace soo_run(const Objective& objective, const SooConfig& config, std::uint64_t seed = 0,
                 const SooOptions& options = {});

}  // namespace optree
