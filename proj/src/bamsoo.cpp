#include "optree/bamsoo.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "sweep.hpp"

namespace optree {

ConfidenceSchedule::ConfidenceSchedule(double eta) : eta_(eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("ConfidenceSchedule: eta must lie in (0, 1)");
    }
}

double ConfidenceSchedule::width(std::size_t N) const {
    if (N < 1) throw std::invalid_argument("ConfidenceSchedule: N must be at least 1");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double n = static_cast<double>(N);
    // log(pi^2 N^2 / 6 eta) > 0 because eta < 1 < pi^2 / 6.
    const double radicand = 2.0 * (std::log(pi2 / (6.0 * eta_)) + 2.0 * std::log(n));
    assert(radicand > 0.0);
    return std::sqrt(radicand);
}

double b_n(const ConfidenceSchedule& schedule, std::size_t N) { return schedule.width(N); }

void write_gate_log_csv(std::ostream& os, const std::vector<GateRecord>& log) {
    const auto old_precision = os.precision(17);
    os << "N,level,index,mu,sigma,B_N,U,L,f_plus,decision\n";
    for (const auto& r : log) {
        os << r.N << ',' << r.level << ',' << r.index.to_string() << ',' << r.mu << ',' << r.sigma
           << ',' << r.b << ',' << r.upper << ',' << r.lower << ',' << r.f_plus << ','
           << (r.evaluated ? "evaluate" : "bound") << '\n';
    }
    os.precision(old_precision);
}

BamsooState::BamsooState(std::size_t dim, KernelSpec kernel, ConfidenceSchedule schedule_)
    : tree(dim),
      gp(std::move(kernel)),
      schedule(schedule_),
      f_plus(-std::numeric_limits<double>::infinity()),
      best_true(-std::numeric_limits<double>::infinity()) {
    if (gp.dim() != dim) {
        throw std::invalid_argument("BamsooState: kernel has " + std::to_string(gp.dim()) +
                                    " lengthscales for a " + std::to_string(dim) +
                                    "-dimensional problem");
    }
}

namespace {

void record_true_value(BamsooState& state, const Point& x, double f) {
    // Cells deep enough to have a center on top of the random initial point
    // add nothing new to the posterior.
    if (!state.gp.find_duplicate(x)) state.gp = state.gp.extend(x, f);
    ++state.t;
    if (f > state.best_true) {
        state.best_true = f;
        state.best_true_x = x;
    }
}

}  // namespace

GateOutcome evaluate_or_bound(BamsooState& state, const Objective& objective, const Cell& cell,
                              const GateObserver& on_gate) {
    const Point x = cell.center();
    ++state.N;
    const PosteriorStats post = state.gp.posterior(x);
    const double b = state.schedule.width(state.N);

    GateRecord rec;
    rec.N = state.N;
    rec.t = state.t;
    rec.level = cell.level;
    rec.index = cell.index;
    rec.x = x;
    rec.mu = post.mean;
    rec.sigma = post.std;
    rec.b = b;
    rec.upper = post.mean + b * post.std;
    rec.lower = post.mean - b * post.std;
    rec.f_plus = state.f_plus;

    GateOutcome out;
    if (rec.upper >= state.f_plus) {
        out.g = evaluate_checked(objective, x);
        out.evaluated = true;
        record_true_value(state, x, out.g);
    } else {
        out.g = rec.lower;
        out.evaluated = false;
    }
    if (out.g > state.f_plus) state.f_plus = out.g;

    rec.evaluated = out.evaluated;
    rec.g = out.g;
    if (on_gate) on_gate(rec);
    return out;
}

RunTrace bamsoo_run(const Objective& objective, const SooConfig& config,
                    const ConfidenceSchedule& schedule, const KernelSpec& kernel,
                    std::uint64_t seed, const BamsooOptions& options) {
    config.validate();
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    BamsooState state(config.dim, kernel, schedule);
    RunTrace trace;

    // Every true evaluation passes through here, so the trace mirrors D_t.
    const Objective recording = [&](PointView x) {
        const double f = evaluate_checked(objective, x);
        EvalRecord rec;
        rec.t = state.t + 1;
        rec.n = state.n;
        rec.N = state.N;
        rec.x.assign(x.begin(), x.end());
        rec.f = f;
        rec.best_so_far = std::max(state.best_true, f);
        rec.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
        trace.records.push_back(std::move(rec));
        return f;
    };

    auto finish = [&] {
        trace.best_x = state.best_true_x;
        trace.best_f = state.best_true;
        trace.expansions = state.tree.empty() ? 0 : state.tree.expansion_count();
        trace.tree_nodes = state.tree.size();
        trace.bound_checks = state.N;
        if (options.final_tree != nullptr) *options.final_tree = state.tree;
        return trace;
    };

    // Randomized initial sample: joins D and f_plus, not the tree.
    std::mt19937_64 rng(seed);
    const Point x0 = uniform_point(rng, config.dim);
    const double f0 = recording(x0);
    record_true_value(state, x0, f0);
    state.f_plus = f0;
    state.N = state.t;
    if (state.t >= config.budget) return finish();

    // The root center is evaluated unconditionally.
    const Point root_center = root_cell(config.dim).center();
    const double g_root = recording(root_center);
    record_true_value(state, root_center, g_root);
    state.tree.set_root(g_root, true);
    state.f_plus = std::max(state.f_plus, g_root);
    state.N = state.t;

    GateObserver on_gate = [&](const GateRecord& rec) {
        if (options.gate_log != nullptr) options.gate_log->push_back(rec);
        if (options.on_gate) options.on_gate(rec);
    };

    detail::run_sweeps(
        state.tree, config.hmax_epsilon, state.n,
        [&](const Cell& cell) {
            const GateOutcome out = evaluate_or_bound(state, recording, cell, on_gate);
            return std::make_pair(out.g, out.evaluated);
        },
        [&] { return state.t >= config.budget || state.N >= options.max_bound_checks; },
        options.on_expand);

    return finish();
}

}  // namespace optree
