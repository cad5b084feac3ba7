#include "optree/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "optree/bamsoo.hpp"
#include "optree/gpucb.hpp"
#include "optree/soo.hpp"

namespace optree {

GpPriorSample::GpPriorSample(KernelSpec kernel, std::uint64_t seed)
    : gp_(std::move(kernel)), rng_(seed) {}

double GpPriorSample::operator()(PointView x) {
    if (auto i = gp_.find_duplicate(x)) return gp_.values()[*i];
    const PosteriorStats p = gp_.posterior(x);
    std::normal_distribution<double> z(0.0, 1.0);
    const double f = p.mean + p.std * z(rng_);
    gp_ = gp_.extend(x, f);
    return f;
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

// Smallest k with P(Binomial(n, p) > k) below alpha.
std::size_t binomial_quantile(std::size_t n, double p, double alpha) {
    double pmf = std::pow(1.0 - p, static_cast<double>(n));
    double cdf = pmf;
    std::size_t k = 0;
    while (1.0 - cdf >= alpha && k < n) {
        pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * p / (1.0 - p);
        ++k;
        cdf += pmf;
    }
    return k;
}

void finish_statistical(SuiteReport& r, double rate) {
    // Small smoke runs fall back to a binomial tail test at the limiting rate.
    const auto by_rate = static_cast<std::size_t>(std::floor(rate * static_cast<double>(r.trials)));
    const std::size_t tail = binomial_quantile(r.trials, std::min(rate, 0.5), 1e-3);
    const std::size_t allowed = r.trials >= 200 ? by_rate : std::max(by_rate, tail);
    r.allowed = static_cast<double>(allowed);
    r.passed = r.failures <= allowed;
    std::ostringstream os;
    os << "violation rate " << (r.trials ? static_cast<double>(r.failures) / r.trials : 0.0)
       << " (limit " << rate << ")";
    r.notes.push_back(os.str());
}

bool inside(double f, double lower, double upper) {
    const double tol = 1e-9 * (1.0 + std::abs(f));
    return f >= lower - tol && f <= upper + tol;
}

KernelSpec coverage_kernel(const CoverageOptions& o) {
    return KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, o.lengthscale, 1.0);
}

KernelSpec coverage_prior(const CoverageOptions& o) {
    const double ls = o.prior_lengthscale > 0.0 ? o.prior_lengthscale : o.lengthscale;
    return KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, ls, 1.0);
}

}  // namespace

SuiteReport verify_variance_bound(std::size_t trials, std::uint64_t seed) {
    SuiteReport r;
    r.suite = "variance-bound";
    r.trials = trials;
    double worst = -std::numeric_limits<double>::infinity();
    constexpr std::size_t kQueries = 20;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(trial_seed(seed, trial));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto family = trial % 2 == 0 ? KernelFamily::SquaredExponential : KernelFamily::Matern52;
        const std::size_t dim = 1 + rng() % 6;
        std::vector<double> ls(dim);
        for (double& l : ls) l = 0.05 + 0.95 * u(rng);
        const double sv = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const KernelSpec kernel(family, ls, sv);
        const double lip = kernel.lipschitz_constant();

        const std::size_t t = 1 + rng() % 30;
        std::vector<Point> xs;
        std::vector<double> ys;
        std::normal_distribution<double> z(0.0, std::sqrt(sv));
        while (xs.size() < t) {
            Point x = uniform_point(rng, dim);
            bool dup = false;
            for (const auto& p : xs) dup = dup || squared_distance(p, x) < 1e-12;
            if (dup) continue;
            xs.push_back(std::move(x));
            ys.push_back(z(rng));
        }
        const GpState gp = GpState::fit(kernel, xs, ys);
        const double floor = std::sqrt(gp.jitter());

        bool failed = false;
        for (std::size_t q = 0; q < kQueries; ++q) {
            Point y;
            if (q % 2 == 0) {
                y = uniform_point(rng, dim);
            } else {
                // Near a data point, where the bound is tight.
                y = xs[rng() % xs.size()];
                const double radius = std::pow(10.0, -4.0 + 3.0 * u(rng));
                for (double& c : y) c = std::clamp(c + radius * (2.0 * u(rng) - 1.0), 0.0, 1.0);
            }
            const double sigma = gp.posterior(y).std;
            const double bound = lip * gp.min_distance(y);
            const double excess = sigma - bound * (1.0 + 1e-6) - floor;
            worst = std::max(worst, excess);
            if (excess > 0.0) failed = true;
        }
        if (failed) ++r.failures;
    }
    r.allowed = 0.0;
    r.passed = r.failures == 0;
    std::ostringstream os;
    os << "max sigma - L*dist - sqrt(jitter) = " << worst;
    r.notes.push_back(os.str());
    return r;
}

SuiteReport verify_coverage_bamsoo(std::size_t trials, std::uint64_t seed,
                                   const CoverageOptions& options) {
    SuiteReport r;
    r.suite = "coverage (BaMSOO gates)";
    r.trials = trials;
    const KernelSpec kernel = coverage_kernel(options);
    const KernelSpec prior = coverage_prior(options);
    const ConfidenceSchedule schedule(options.eta);
    SooConfig config;
    config.budget = options.budget;
    config.dim = 1;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = trial_seed(seed, trial);
        GpPriorSample f(prior, s);
        bool violated = false;
        BamsooOptions opts;
        opts.on_gate = [&](const GateRecord& rec) {
            if (!inside(f(rec.x), rec.lower, rec.upper)) violated = true;
        };
        bamsoo_run([&](PointView x) { return f(x); }, config, schedule, kernel, s, opts);
        if (violated) ++r.failures;
    }
    finish_statistical(r, options.eta + options.slack);
    return r;
}

SuiteReport verify_coverage_gpucb(std::size_t trials, std::uint64_t seed,
                                  const CoverageOptions& options) {
    SuiteReport r;
    r.suite = "coverage (GP-UCB queries)";
    r.trials = trials;
    const KernelSpec kernel = coverage_kernel(options);
    const KernelSpec prior = coverage_prior(options);
    GpucbConfig config;
    config.budget = options.budget;
    config.schedule = ConfidenceSchedule(options.eta);
    // Coverage does not depend on how well the acquisition is maximized.
    config.aux.n_random = 200;
    config.aux.n_starts = 2;
    config.aux.local_iters = 20;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = trial_seed(seed, trial);
        GpPriorSample f(prior, s);
        bool violated = false;
        GpucbOptions opts;
        opts.on_query = [&](const GpucbQuery& q) {
            if (!inside(f(q.x), q.mu - q.b * q.sigma, q.mu + q.b * q.sigma)) violated = true;
        };
        gpucb_run([&](PointView x) { return f(x); }, 1, config, kernel, s, opts);
        if (violated) ++r.failures;
    }
    finish_statistical(r, options.eta + options.slack);
    return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two matching points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("loglog_slope: values must be positive");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
    return (n * sxy - sx * sy) / denom;
}

GrowthProfile bn_growth_profile(std::size_t trials, std::uint64_t seed) {
    const KernelSpec kernel = KernelSpec::isotropic(KernelFamily::SquaredExponential, 2, 0.2, 1.0);
    const ConfidenceSchedule schedule(0.05);
    SooConfig config;
    config.budget = 60;
    config.dim = 2;

    std::map<int, std::pair<double, std::size_t>> pooled;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = trial_seed(seed, trial);
        GpPriorSample f(kernel, s);
        BamsooOptions opts;
        opts.on_gate = [&](const GateRecord& rec) {
            auto& [sum, count] = pooled[rec.level];
            sum += rec.b;
            ++count;
        };
        bamsoo_run([&](PointView x) { return f(x); }, config, schedule, kernel, s, opts);
    }

    GrowthProfile out;
    constexpr std::size_t kMinCount = 3;
    for (const auto& [level, acc] : pooled) {
        if (acc.second < kMinCount) continue;
        out.levels.push_back(level);
        out.mean_b.push_back(acc.first / static_cast<double>(acc.second));
        out.counts.push_back(acc.second);
    }
    out.non_decreasing = true;
    for (std::size_t i = 1; i < out.mean_b.size(); ++i) {
        if (out.mean_b[i] < out.mean_b[i - 1] * (1.0 - 1e-12)) out.non_decreasing = false;
    }
    if (out.levels.size() >= 2) {
        std::vector<double> h(out.levels.begin(), out.levels.end());
        out.loglog_slope = loglog_slope(h, out.mean_b);
    }
    return out;
}

SuiteReport verify_bn_growth(std::size_t trials, std::uint64_t seed) {
    SuiteReport r;
    r.suite = "bn-growth";
    r.trials = trials;
    const GrowthProfile p = bn_growth_profile(trials, seed);
    if (!p.non_decreasing) ++r.failures;
    if (p.levels.size() < 2 || p.loglog_slope > kMaxGrowthExponent) ++r.failures;
    r.allowed = 0.0;
    r.passed = r.failures == 0;
    std::ostringstream os;
    os << "levels " << (p.levels.empty() ? 0 : p.levels.front()) << ".."
       << (p.levels.empty() ? 0 : p.levels.back()) << ", log-log slope " << p.loglog_slope
       << ", non-decreasing " << (p.non_decreasing ? "yes" : "no");
    r.notes.push_back(os.str());
    return r;
}

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"variance-bound", "coverage", "bn-growth", "all"};
    return names;
}

std::vector<SuiteReport> run_verify_suite(const std::string& name, std::size_t trials,
                                          std::uint64_t seed) {
    std::vector<SuiteReport> out;
    const bool all = name == "all";
    if (!all && std::find(verify_suite_names().begin(), verify_suite_names().end(), name) ==
                    verify_suite_names().end()) {
        throw std::invalid_argument("unknown suite '" + name +
                                    "' (valid: variance-bound, coverage, bn-growth, all)");
    }
    if (all || name == "variance-bound") out.push_back(verify_variance_bound(trials, seed));
    if (all || name == "coverage") {
        out.push_back(verify_coverage_bamsoo(trials, seed));
        out.push_back(verify_coverage_gpucb(trials, seed));
    }
    if (all || name == "bn-growth") out.push_back(verify_bn_growth(trials, seed));
    return out;
}

}  // namespace optree
