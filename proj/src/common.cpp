#include "optree/common.hpp"

#include <cmath>
#include <sstream>

namespace optree {

NonFiniteObjective::NonFiniteObjective(const Point& x, double value)
    : std::runtime_error("objective returned non-finite value " + std::to_string(value) + " at " +
                         format_point(x)),
      point_(x),
      value_(value) {}

double evaluate_checked(const Objective& objective, PointView x) {
    const double value = objective(x);
    if (!std::isfinite(value)) {
        throw NonFiniteObjective(Point(x.begin(), x.end()), value);
    }
    return value;
}

std::string format_point(PointView x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i != 0) os << ", ";
        os << x[i];
    }
    os << ')';
    return os.str();
}

double squared_distance(PointView a, PointView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

bool all_finite(PointView x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Point uniform_point(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point x(dim);
    for (double& v : x) v = u(rng);
    return x;
}

}  // namespace optree
