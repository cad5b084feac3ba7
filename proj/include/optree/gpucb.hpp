#pragma once

#include <cstdint>
#include <functional>

#include "optree/bamsoo.hpp"
#include "optree/common.hpp"
#include "optree/kernel_gp.hpp"
#include "optree/trace.hpp"

namespace optree {

/// Random multistart followed by coordinate pattern search on [0,1]^dim.
struct AuxConfig {
    std::size_t n_starts = 5;
    std::size_t n_random = 1000;
    std::size_t local_iters = 40;
    double local_shrink = 0.5;
    double initial_step = 0.125;  // pattern step as a fraction of the box side

    void validate() const;
    bool operator==(const AuxConfig&) const = default;
};

/// Maximizes `acq` over [0,1]^dim. Deterministic given `seed`; among exact
/// ties the earliest candidate is kept. Throws std::domain_error on NaN.
Point aux_maximize(const std::function<double(PointView)>& acq, std::size_t dim,
                   const AuxConfig& cfg, std::uint64_t seed);

struct AuxResult {
    Point best;
    double best_value = 0.0;
    /// Random candidates sorted by decreasing acquisition value.
    std::vector<std::pair<double, Point>> ranked_candidates;
};

AuxResult aux_maximize_detailed(const std::function<double(PointView)>& acq, std::size_t dim,
                                const AuxConfig& cfg, std::uint64_t seed);

struct GpucbConfig {
    std::size_t budget = 150;
    ConfidenceSchedule schedule{0.05};
    AuxConfig aux;

    void validate() const;
};

/// Proposals closer than this to observed data are replaced by the best
/// random candidate that is not.
inline constexpr double kGpucbMinSeparation = 1e-6;

/// Posterior at a GP-UCB query point, taken just before the objective call.
struct GpucbQuery {
    std::size_t t = 0;  // |D_t| the posterior was conditioned on
    Point x;
    double mu = 0.0;
    double sigma = 0.0;
    double b = 0.0;
};

struct GpucbOptions {
    std::function<void(const GpucbQuery&)> on_query;
};

/// GP-UCB: a seeded uniform first point, then x_{t+1} = argmax mu + B_t sigma
/// with B_t from the shared confidence schedule.
RunTrace gpucb_run(const Objective& objective, std::size_t dim, const GpucbConfig& cfg,
                   const KernelSpec& kernel, std::uint64_t seed, const GpucbOptions& options = {});

}  // namespace optree
