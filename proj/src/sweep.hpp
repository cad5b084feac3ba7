#pragma once

#include <algorithm>
#include <limits>
#include <utility>

#include "optree/partition.hpp"
#include "optree/soo.hpp"

namespace optree::detail {

// Level-by-level sweeps shared by SOO and BaMSOO. `score_child(cell)` returns
// the (g, evaluated) payload of a freshly created child; `exhausted()` is
// checked before every expansion, so an expansion in progress always
// completes both children.
template <class ScoreChild, class Exhausted>
void run_sweeps(Tree& tree, double hmax_epsilon, std::size_t& n, ScoreChild&& score_child,
                Exhausted&& exhausted, const ExpansionObserver& on_expand) {
    std::size_t sweep = 0;
    while (!exhausted()) {
        ++sweep;
        double nu_max = -std::numeric_limits<double>::infinity();
        bool expanded = false;
        const int last_level = std::min(tree.depth(), hmax(n, hmax_epsilon));
        for (int h = 0; h <= last_level; ++h) {
            if (exhausted()) return;
            const auto selected = tree.leaf_argmax_at_level(h);
            if (!selected) continue;
            const double g = tree.node(*selected).g;
            if (!(g > nu_max)) continue;

            if (on_expand) on_expand(ExpansionEvent{sweep, *selected, h, g, nu_max}, tree);
            auto cells = split_cell(tree.node(*selected).cell);
            const auto left = score_child(cells.first);
            const auto right = score_child(cells.second);
            tree.expand(*selected, std::move(cells), {left.first, right.first},
                        {left.second, right.second});
            nu_max = g;
            ++n;
            expanded = true;
        }
        // Every leaf sits deeper than the current depth cap.
        if (!expanded) return;
    }
}

}  // namespace optree::detail
