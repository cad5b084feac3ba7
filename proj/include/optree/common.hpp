#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace optree {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Black-box objective on the unit hypercube. Larger is better.
using Objective = std::function<double(PointView)>;

/// Raised when an objective returns NaN or Inf.
class NonFiniteObjective : public std::runtime_error {
public:
    NonFiniteObjective(const Point& x, double value);

    const Point& point() const noexcept { return point_; }
    double value() const noexcept { return value_; }

private:
    Point point_;
    double value_;
};

/// Calls the objective and throws NonFiniteObjective on NaN/Inf.
double evaluate_checked(const Objective& objective, PointView x);

std::string format_point(PointView x);

double squared_distance(PointView a, PointView b);

bool all_finite(PointView x);

/// Uniform draw from [0,1)^dim.
Point uniform_point(std::mt19937_64& rng, std::size_t dim);

}  // namespace optree
