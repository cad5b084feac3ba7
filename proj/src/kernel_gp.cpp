#include "optree/kernel_gp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace optree {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873127623544;

// Variance below -kNegativeVarianceTolerance * s2 is a bug, not roundoff.
constexpr double kNegativeVarianceTolerance = 1e-8;
constexpr int kRefinementPasses = 1;

void check_point(const KernelSpec& spec, PointView x, const char* what) {
    if (x.size() != spec.dim()) {
        throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                    std::to_string(spec.dim()) + ", got " +
                                    std::to_string(x.size()));
    }
    if (!all_finite(x)) {
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate in " +
                                    format_point(x));
    }
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::SquaredExponential:
            return "se";
        case KernelFamily::Matern52:
            return "matern52";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "se" || name == "squared_exponential") return KernelFamily::SquaredExponential;
    if (name == "matern52" || name == "matern5_2") return KernelFamily::Matern52;
    throw std::invalid_argument("unknown kernel family '" + name + "' (valid: se, matern52)");
}

KernelSpec::KernelSpec(KernelFamily family, std::vector<double> lengthscales,
                       double signal_variance)
    : family_(family), lengthscales_(std::move(lengthscales)), signal_variance_(signal_variance) {
    if (lengthscales_.empty()) {
        throw std::invalid_argument("KernelSpec: at least one lengthscale is required");
    }
    for (double l : lengthscales_) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw std::invalid_argument("KernelSpec: lengthscales must be positive and finite");
        }
    }
    if (!(signal_variance_ > 0.0) || !std::isfinite(signal_variance_)) {
        throw std::invalid_argument("KernelSpec: signal variance must be positive and finite");
    }
    inv_lengthscales_.reserve(lengthscales_.size());
    for (double l : lengthscales_) inv_lengthscales_.push_back(1.0 / l);
}

KernelSpec KernelSpec::isotropic(KernelFamily family, std::size_t dim, double lengthscale,
                                 double signal_variance) {
    return KernelSpec(family, std::vector<double>(dim, lengthscale), signal_variance);
}

double KernelSpec::operator()(PointView x, PointView y) const {
    check_point(*this, x, "kernel_eval");
    check_point(*this, y, "kernel_eval");
    return eval_unchecked(x.data(), y.data());
}

double KernelSpec::eval_unchecked(const double* x, const double* y) const noexcept {
    double r2 = 0.0;
    const std::size_t d = inv_lengthscales_.size();
    for (std::size_t i = 0; i < d; ++i) {
        const double z = (x[i] - y[i]) * inv_lengthscales_[i];
        r2 += z * z;
    }
    switch (family_) {
        case KernelFamily::SquaredExponential:
            return signal_variance_ * std::exp(-0.5 * r2);
        case KernelFamily::Matern52: {
            const double a = kSqrt5 * std::sqrt(r2);
            return signal_variance_ * (1.0 + a + a * a / 3.0) * std::exp(-a);
        }
    }
    return 0.0;
}

double KernelSpec::lipschitz_constant() const noexcept {
    const double inv_min = *std::max_element(inv_lengthscales_.begin(), inv_lengthscales_.end());
    // -k''(0): 1 for the squared exponential profile, 5/3 for Matern 5/2.
    const double curvature = family_ == KernelFamily::Matern52 ? 5.0 / 3.0 : 1.0;
    return std::sqrt(signal_variance_ * curvature) * inv_min;
}

double kernel_eval(const KernelSpec& spec, PointView x, PointView y) { return spec(x, y); }

double lipschitz_constant(const KernelSpec& spec) { return spec.lipschitz_constant(); }

GpState::GpState(KernelSpec kernel)
    : kernel_(std::move(kernel)),
      gram_(0, 0),
      factor_(0, 0),
      weights_(0),
      jitter_(kInitialJitterScale * kernel_.signal_variance()) {}

GpState GpState::fit(const KernelSpec& kernel, const std::vector<Point>& points,
                     const std::vector<double>& values, double jitter) {
    if (points.size() != values.size()) {
        throw std::invalid_argument("gp_fit: " + std::to_string(points.size()) + " points but " +
                                    std::to_string(values.size()) + " values");
    }
    GpState state(kernel);
    for (std::size_t i = 0; i < points.size(); ++i) {
        check_point(kernel, points[i], "gp_fit");
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("gp_fit: non-finite value at " + format_point(points[i]));
        }
        if (auto dup = state.find_duplicate(points[i])) {
            throw std::invalid_argument("gp_fit: duplicate point " + format_point(points[i]));
        }
        state.points_.push_back(points[i]);
        state.values_.push_back(values[i]);
    }
    const double start = jitter > 0.0 ? jitter : kInitialJitterScale * kernel.signal_variance();
    state.refactor(start);
    return state;
}

void GpState::refactor(double starting_jitter) {
    const auto t = static_cast<Eigen::Index>(points_.size());
    Eigen::MatrixXd gram(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double k = kernel_.eval_unchecked(points_[i].data(), points_[j].data());
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    gram_ = gram;
    const double cap = kMaxJitterScale * kernel_.signal_variance() * (1.0 + 1e-12);
    for (double jitter = starting_jitter; jitter <= cap; jitter *= 10.0) {
        Eigen::MatrixXd shifted = gram;
        shifted.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            jitter_ = jitter;
            solve_weights();
            return;
        }
    }
    throw std::runtime_error("GP Cholesky factorization failed for " + std::to_string(t) +
                             " points with jitter up to " + std::to_string(cap));
}

void GpState::refined_solve(Eigen::VectorXd& v, const Eigen::VectorXd& rhs) const {
    const auto t = rhs.size();
    const auto solve = [&](Eigen::VectorXd& u) {
        factor_.triangularView<Eigen::Lower>().solveInPlace(u);
        factor_.triangularView<Eigen::Lower>().transpose().solveInPlace(u);
    };
    v = rhs;
    solve(v);
    // Clustered points make K badly conditioned; refine with an extended-precision residual.
    Eigen::VectorXd r(t);
    for (int pass = 0; pass < kRefinementPasses; ++pass) {
        for (Eigen::Index i = 0; i < t; ++i) {
            long double acc = rhs[i] - static_cast<long double>(jitter_) * v[i];
            for (Eigen::Index j = 0; j < t; ++j) {
                acc -= static_cast<long double>(gram_(i, j)) * v[j];
            }
            r[i] = static_cast<double>(acc);
        }
        solve(r);
        v += r;
    }
}

void GpState::solve_weights() {
    refined_solve(weights_, Eigen::Map<const Eigen::VectorXd>(values_.data(), values_.size()));
}

GpState GpState::extend(PointView x, double f) const {
    check_point(kernel_, x, "gp_extend");
    if (!std::isfinite(f)) {
        throw std::invalid_argument("gp_extend: non-finite value at " + format_point(x));
    }
    if (find_duplicate(x)) {
        throw std::invalid_argument("gp_extend: duplicate point " + format_point(x));
    }
    GpState next(*this);
    next.points_.emplace_back(x.begin(), x.end());
    next.values_.push_back(f);

    const auto t = static_cast<Eigen::Index>(points_.size());
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        k[i] = kernel_.eval_unchecked(points_[i].data(), x.data());
    }
    factor_.triangularView<Eigen::Lower>().solveInPlace(k);
    const double pivot2 = kernel_.eval_unchecked(x.data(), x.data()) + jitter_ - k.squaredNorm();
    if (!(pivot2 > 0.0)) {
        next.refactor(jitter_ * 10.0);
        return next;
    }
    next.gram_.conservativeResize(t + 1, t + 1);
    for (Eigen::Index i = 0; i < t; ++i) {
        const double kx = kernel_.eval_unchecked(points_[i].data(), x.data());
        next.gram_(i, t) = kx;
        next.gram_(t, i) = kx;
    }
    next.gram_(t, t) = kernel_.eval_unchecked(x.data(), x.data());
    next.factor_.conservativeResize(t + 1, t + 1);
    next.factor_.col(t).setZero();
    next.factor_.row(t).head(t) = k.transpose();
    next.factor_(t, t) = std::sqrt(pivot2);
    next.solve_weights();
    return next;
}

PosteriorStats GpState::posterior(PointView x) const {
    check_point(kernel_, x, "gp_posterior");
    const double prior = kernel_.eval_unchecked(x.data(), x.data());
    const auto t = static_cast<Eigen::Index>(points_.size());
    if (t == 0) return {0.0, std::sqrt(prior)};

    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        k[i] = kernel_.eval_unchecked(points_[i].data(), x.data());
    }
    long double mean = 0.0L;
    for (Eigen::Index i = 0; i < t; ++i) mean += static_cast<long double>(k[i]) * weights_[i];
    Eigen::VectorXd v;
    refined_solve(v, k);
    long double explained = 0.0L;
    for (Eigen::Index i = 0; i < t; ++i) explained += static_cast<long double>(k[i]) * v[i];
    double var = static_cast<double>(prior - explained);
    if (var < 0.0) {
        if (var < -kNegativeVarianceTolerance * kernel_.signal_variance()) {
            throw std::logic_error("gp_posterior: variance " + std::to_string(var) +
                                   " is negative beyond roundoff at " + format_point(x));
        }
        var = 0.0;
    }
    return {static_cast<double>(mean), std::sqrt(var)};
}

std::optional<std::size_t> GpState::find_duplicate(PointView x) const {
    constexpr double tol2 = kDuplicateTolerance * kDuplicateTolerance;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (squared_distance(points_[i], x) <= tol2) return i;
    }
    return std::nullopt;
}

double GpState::min_distance(PointView x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points_) best = std::min(best, squared_distance(p, x));
    return std::sqrt(best);
}

GpState gp_fit(const KernelSpec& kernel, const std::vector<Point>& points,
               const std::vector<double>& values, double jitter) {
    return GpState::fit(kernel, points, values, jitter);
}

GpState gp_extend(const GpState& state, PointView x, double f) { return state.extend(x, f); }

PosteriorStats gp_posterior(const GpState& state, PointView x) { return state.posterior(x); }

}  // namespace optree
