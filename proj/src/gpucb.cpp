#include "optree/gpucb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace optree {

void AuxConfig::validate() const {
    if (n_starts < 1 || n_random < 1 || local_iters < 1) {
        throw std::invalid_argument("AuxConfig: n_starts, n_random and local_iters must be positive");
    }
    if (!(local_shrink > 0.0 && local_shrink < 1.0)) {
        throw std::invalid_argument("AuxConfig: local_shrink must lie in (0, 1)");
    }
    if (!(initial_step > 0.0 && initial_step <= 1.0)) {
        throw std::invalid_argument("AuxConfig: initial_step must lie in (0, 1]");
    }
}

void GpucbConfig::validate() const {
    if (budget < 1) throw std::invalid_argument("GpucbConfig: budget must be at least 1");
    aux.validate();
}

namespace {

double checked_acq(const std::function<double(PointView)>& acq, PointView x) {
    const double v = acq(x);
    if (std::isnan(v)) {
        throw std::domain_error("aux_maximize: acquisition returned NaN at " + format_point(x));
    }
    return v;
}

// Coordinate pattern search; moves on strict improvement only.
std::pair<Point, double> pattern_search(const std::function<double(PointView)>& acq, Point x,
                                        double value, const AuxConfig& cfg) {
    double step = cfg.initial_step;
    Point y(x.size());
    for (std::size_t iter = 0; iter < cfg.local_iters && step > 1e-12; ++iter) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double dir : {1.0, -1.0}) {
                y = x;
                y[i] = std::clamp(x[i] + dir * step, 0.0, 1.0);
                if (y[i] == x[i]) continue;
                const double v = checked_acq(acq, y);
                if (v > value) {
                    x.swap(y);
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= cfg.local_shrink;
    }
    return {std::move(x), value};
}

}  // namespace

AuxResult aux_maximize_detailed(const std::function<double(PointView)>& acq, std::size_t dim,
                                const AuxConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (dim < 1) throw std::invalid_argument("aux_maximize: dim must be at least 1");
    std::mt19937_64 rng(seed);

    AuxResult out;
    out.ranked_candidates.reserve(cfg.n_random);
    for (std::size_t i = 0; i < cfg.n_random; ++i) {
        Point x = uniform_point(rng, dim);
        const double v = checked_acq(acq, x);
        out.ranked_candidates.emplace_back(v, std::move(x));
    }
    std::stable_sort(out.ranked_candidates.begin(), out.ranked_candidates.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    out.best = out.ranked_candidates.front().second;
    out.best_value = out.ranked_candidates.front().first;
    const std::size_t starts = std::min(cfg.n_starts, out.ranked_candidates.size());
    for (std::size_t s = 0; s < starts; ++s) {
        auto [x, v] = pattern_search(acq, out.ranked_candidates[s].second,
                                     out.ranked_candidates[s].first, cfg);
        if (v > out.best_value) {
            out.best = std::move(x);
            out.best_value = v;
        }
    }
    return out;
}

Point aux_maximize(const std::function<double(PointView)>& acq, std::size_t dim,
                   const AuxConfig& cfg, std::uint64_t seed) {
    return aux_maximize_detailed(acq, dim, cfg, seed).best;
}

RunTrace gpucb_run(const Objective& objective, std::size_t dim, const GpucbConfig& cfg,
                   const KernelSpec& kernel, std::uint64_t seed, const GpucbOptions& options) {
    cfg.validate();
    if (kernel.dim() != dim) {
        throw std::invalid_argument("gpucb_run: kernel dimension does not match problem dimension");
    }
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    std::mt19937_64 rng(seed);
    GpState gp(kernel);
    RunTrace trace;

    auto evaluate = [&](Point x) {
        const double f = evaluate_checked(objective, x);
        gp = gp.extend(x, f);
        EvalRecord rec;
        rec.t = trace.records.size() + 1;
        rec.n = 0;
        rec.N = rec.t;
        rec.f = f;
        if (trace.records.empty() || f > trace.best_f) {
            trace.best_f = f;
            trace.best_x = x;
        }
        rec.best_so_far = trace.best_f;
        rec.x = std::move(x);
        rec.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
        trace.records.push_back(std::move(rec));
    };

    evaluate(uniform_point(rng, dim));
    while (trace.records.size() < cfg.budget) {
        const double b = cfg.schedule.width(gp.size());
        const auto ucb = [&](PointView x) {
            const PosteriorStats p = gp.posterior(x);
            return p.mean + b * p.std;
        };
        AuxResult proposal = aux_maximize_detailed(ucb, dim, cfg.aux, rng());
        Point next = std::move(proposal.best);
        if (gp.min_distance(next) < kGpucbMinSeparation) {
            bool replaced = false;
            for (auto& [value, candidate] : proposal.ranked_candidates) {
                if (gp.min_distance(candidate) >= kGpucbMinSeparation) {
                    next = std::move(candidate);
                    replaced = true;
                    break;
                }
            }
            while (!replaced) {
                next = uniform_point(rng, dim);
                replaced = gp.min_distance(next) >= kGpucbMinSeparation;
            }
        }
        if (options.on_query) {
            const PosteriorStats p = gp.posterior(next);
            options.on_query(GpucbQuery{gp.size(), next, p.mean, p.std, b});
        }
        evaluate(std::move(next));
    }

    trace.bound_checks = trace.records.size();
    return trace;
}

}  // namespace optree
