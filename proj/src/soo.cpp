#include "optree/soo.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sweep.hpp"

namespace optree {

void SooConfig::validate() const {
    if (budget < 1) throw std::invalid_argument("SooConfig: budget must be at least 1");
    if (!(hmax_epsilon > 0.0 && hmax_epsilon < 1.0)) {
        throw std::invalid_argument("SooConfig: hmax_epsilon must lie in (0, 1)");
    }
    if (dim < 1) throw std::invalid_argument("SooConfig: dim must be at least 1");
}

int hmax(std::size_t n, double epsilon) {
    if (n == 0) return 1;
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), epsilon)));
}

RunTrace soo_run(const Objective& objective, const SooConfig& config, std::uint64_t /*seed*/,
                 const SooOptions& options) {
    config.validate();
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    RunTrace trace;
    std::size_t n = 1;
    auto evaluate = [&](const Point& x) {
        const double f = evaluate_checked(objective, x);
        EvalRecord rec;
        rec.t = trace.records.size() + 1;
        rec.n = n;
        rec.N = rec.t;
        rec.x = x;
        rec.f = f;
        if (trace.records.empty() || f > trace.best_f) {
            trace.best_f = f;
            trace.best_x = x;
        }
        rec.best_so_far = trace.best_f;
        rec.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
        trace.records.push_back(std::move(rec));
        return f;
    };

    Tree tree(config.dim);
    tree.set_root(evaluate(root_cell(config.dim).center()), true);

    detail::run_sweeps(
        tree, config.hmax_epsilon, n,
        [&](const Cell& cell) { return std::make_pair(evaluate(cell.center()), true); },
        [&] { return trace.records.size() >= config.budget; }, options.on_expand);

    trace.expansions = tree.expansion_count();
    trace.tree_nodes = tree.size();
    trace.bound_checks = 0;
    if (options.final_tree != nullptr) *options.final_tree = std::move(tree);
    return trace;
}

}  // namespace optree
