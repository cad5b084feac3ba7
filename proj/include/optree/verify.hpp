#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "optree/common.hpp"
#include "optree/kernel_gp.hpp"

namespace optree {

/// A function drawn from a zero-mean GP prior, revealed lazily: each new
/// query is sampled from the conditional given every value revealed so far,
/// so any sequence of queries sees one consistent prior sample.
class GpPriorSample {
public:
    GpPriorSample(KernelSpec kernel, std::uint64_t seed);

    double operator()(PointView x);

    std::size_t revealed() const noexcept { return gp_.size(); }

private:
    GpState gp_;
    std::mt19937_64 rng_;
};

struct SuiteReport {
    std::string suite;
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// Largest failure count (or rate, for statistical suites) still passing.
    double allowed = 0.0;
    bool passed = false;
    std::vector<std::string> notes;
};

/// sigma(y) <= L * min_i |x_i - y| over random datasets and queries, for each
/// kernel family. A trial fails when sigma exceeds the bound by more than a
/// 1e-6 relative slack plus sqrt(jitter) (the jittered posterior's floor).
SuiteReport verify_variance_bound(std::size_t trials, std::uint64_t seed);

struct CoverageOptions {
    double eta = 0.05;
    std::size_t budget = 30;
    double lengthscale = 0.1;
    double prior_lengthscale = 0.0;  // lengthscale of the sampled functions; 0 means `lengthscale`
    double slack = 0.04;  // allowed excess of the violation rate over eta
};

/// BaMSOO on lazily drawn 1-D GP prior samples: fraction of runs where some
/// gate-time interval [L, U] misses the true value must stay <= eta + slack.
SuiteReport verify_coverage_bamsoo(std::size_t trials, std::uint64_t seed,
                                   const CoverageOptions& options = {});

/// Same check for GP-UCB at its query points.
SuiteReport verify_coverage_gpucb(std::size_t trials, std::uint64_t seed,
                                  const CoverageOptions& options = {});

struct GrowthProfile {
    std::vector<int> levels;
    std::vector<double> mean_b;
    std::vector<std::size_t> counts;
    double loglog_slope = 0.0;
    bool non_decreasing = false;
};

/// Mean gate-time B_N per tree level pooled over instrumented BaMSOO runs
/// on 2-D GP prior samples.
GrowthProfile bn_growth_profile(std::size_t trials, std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr double kMaxGrowthExponent = 0.75;

/// Passes when the per-level means are non-decreasing and the log-log slope
/// is at most kMaxGrowthExponent.
SuiteReport verify_bn_growth(std::size_t trials, std::uint64_t seed);

const std::vector<std::string>& verify_suite_names();

/// "variance-bound", "coverage", "bn-growth" or "all".
/// Throws std::invalid_argument on unknown names.
std::vector<SuiteReport> run_verify_suite(const std::string& name, std::size_t trials,
                                          std::uint64_t seed);

}  // namespace optree
