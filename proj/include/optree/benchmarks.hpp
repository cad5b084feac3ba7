#pragma once

#include <string>
#include <vector>

#include "optree/common.hpp"

namespace optree {

/// A test objective rescaled to [0,1]^D and negated for maximization.
struct Benchmark {
    std::string name;
    std::size_t dim = 0;
    double optimum_value = 0.0;
    std::vector<Point> optimum_points;  // in unit coordinates
    std::vector<std::pair<double, double>> domain;  // native box, one interval per axis
    Objective eval;

    /// Affine map from unit coordinates to the native domain.
    Point to_native(PointView unit) const;
};

/// Standard minimization forms on native coordinates.
namespace raw {
double branin(PointView x);
double rosenbrock(PointView x);
double hartmann3(PointView x);
double hartmann6(PointView x);
double shekel10(PointView x);
}  // namespace raw

const std::vector<std::string>& benchmark_names();

/// One of branin, rosenbrock2, hartmann3, hartmann6, shekel10.
/// Throws std::invalid_argument listing the valid names otherwise.
Benchmark get_benchmark(const std::string& name);

inline constexpr double kLogRegretFloor = -16.0;

/// log10(max(f* - f_plus, 1e-16)). Throws std::logic_error when f_plus
/// exceeds the stored optimum by more than 1e-9.
double log_regret(const Benchmark& bench, double f_plus);
double log_regret(double optimum_value, double f_plus);

}  // namespace optree
