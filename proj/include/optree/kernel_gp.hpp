#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "optree/common.hpp"

namespace optree {

enum class KernelFamily { SquaredExponential, Matern52 };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Stationary anisotropic covariance kappa(x, y) = s2 * k(r), where r is the
/// lengthscale-weighted distance between x and y.
class KernelSpec {
public:
    /// Throws std::invalid_argument on empty, non-positive or non-finite
    /// lengthscales or signal variance.
    KernelSpec(KernelFamily family, std::vector<double> lengthscales, double signal_variance = 1.0);

    /// Same lengthscale along every one of `dim` axes.
    static KernelSpec isotropic(KernelFamily family, std::size_t dim, double lengthscale,
                                double signal_variance = 1.0);

    KernelFamily family() const noexcept { return family_; }
    const std::vector<double>& lengthscales() const noexcept { return lengthscales_; }
    double signal_variance() const noexcept { return signal_variance_; }
    std::size_t dim() const noexcept { return lengthscales_.size(); }

    /// kappa(x, y). Throws on dimension mismatch or non-finite coordinates.
    double operator()(PointView x, PointView y) const;

    /// Unchecked variant used on hot paths once inputs are validated.
    double eval_unchecked(const double* x, const double* y) const noexcept;

    /// Lipschitz constant of the RKHS embedding: L^2 is the curvature of the
    /// kernel profile at the origin along the shortest lengthscale.
    double lipschitz_constant() const noexcept;

    bool operator==(const KernelSpec&) const = default;

private:
    KernelFamily family_;
    std::vector<double> lengthscales_;
    std::vector<double> inv_lengthscales_;
    double signal_variance_;
};

double kernel_eval(const KernelSpec& spec, PointView x, PointView y);
double lipschitz_constant(const KernelSpec& spec);

struct PosteriorStats {
    double mean = 0.0;
    double std = 0.0;
};

/// Noiseless zero-mean GP posterior conditioned on a set of distinct points.
///
/// Immutable: `extend` returns a new state. The factor is the lower Cholesky
/// factor of K + jitter * I, with jitter escalated x10 from 1e-10 * s2 up to
/// 1e-4 * s2 whenever the factorization fails.
class GpState {
public:
    /// Points closer than this (Euclidean) are treated as the same point.
    static constexpr double kDuplicateTolerance = 1e-12;
    static constexpr double kInitialJitterScale = 1e-10;
    static constexpr double kMaxJitterScale = 1e-4;

    /// Empty prior.
    explicit GpState(KernelSpec kernel);

    /// Throws std::invalid_argument on length mismatch, bad dimensions or
    /// duplicates, std::runtime_error when no jitter up to the cap yields a
    /// positive-definite factor. A non-positive `jitter` selects the default
    /// starting jitter.
    static GpState fit(const KernelSpec& kernel, const std::vector<Point>& points,
                       const std::vector<double>& values, double jitter = 0.0);

    /// Rank-one extension of the factor; falls back to a full refit when the
    /// new pivot is not positive.
    GpState extend(PointView x, double f) const;

    PosteriorStats posterior(PointView x) const;

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dim() const noexcept { return kernel_.dim(); }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const Eigen::MatrixXd& factor() const noexcept { return factor_; }
    double jitter() const noexcept { return jitter_; }

    /// Index of a stored point within kDuplicateTolerance of x, if any.
    std::optional<std::size_t> find_duplicate(PointView x) const;

    /// Smallest Euclidean distance from x to a stored point (inf when empty).
    double min_distance(PointView x) const;

private:
    void refactor(double starting_jitter);
    void solve_weights();
    void refined_solve(Eigen::VectorXd& v, const Eigen::VectorXd& rhs) const;

    KernelSpec kernel_;
    std::vector<Point> points_;
    std::vector<double> values_;
    Eigen::MatrixXd gram_;  // K without jitter
    Eigen::MatrixXd factor_;
    Eigen::VectorXd weights_;  // (K + jitter I)^-1 f
    double jitter_;
};

GpState gp_fit(const KernelSpec& kernel, const std::vector<Point>& points,
               const std::vector<double>& values, double jitter = 0.0);
GpState gp_extend(const GpState& state, PointView x, double f);
PosteriorStats gp_posterior(const GpState& state, PointView x);

}  // namespace optree
