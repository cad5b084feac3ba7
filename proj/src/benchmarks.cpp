#include "optree/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace optree {

namespace raw {

double branin(PointView x) {
    constexpr double pi = std::numbers::pi;
    constexpr double b = 5.1 / (4.0 * pi * pi);
    constexpr double c = 5.0 / pi;
    constexpr double s = 10.0 * (1.0 - 1.0 / (8.0 * pi));
    const double q = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
    return q * q + s * std::cos(x[0]) + 10.0;
}

double rosenbrock(PointView x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

namespace {

constexpr std::array<double, 4> kHartmannAlpha{1.0, 1.2, 3.0, 3.2};

constexpr double kHartmann3A[4][3] = {
    {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
constexpr double kHartmann3P[4][3] = {{0.3689, 0.1170, 0.2673},
                                      {0.4699, 0.4387, 0.7470},
                                      {0.1091, 0.8732, 0.5547},
                                      {0.0381, 0.5743, 0.8828}};

constexpr double kHartmann6A[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                      {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                      {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                      {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
constexpr double kHartmann6P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                      {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

constexpr double kShekelC[10][4] = {{4, 4, 4, 4}, {1, 1, 1, 1}, {8, 8, 8, 8}, {6, 6, 6, 6},
                                    {3, 7, 3, 7}, {2, 9, 2, 9}, {5, 5, 3, 3}, {8, 1, 8, 1},
                                    {6, 2, 6, 2}, {7, 3.6, 7, 3.6}};
constexpr double kShekelBeta[10] = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};

template <std::size_t D>
double hartmann(PointView x, const double (&a)[4][D], const double (&p)[4][D]) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < D; ++j) {
            const double d = x[j] - p[i][j];
            inner += a[i][j] * d * d;
        }
        sum += kHartmannAlpha[i] * std::exp(-inner);
    }
    return -sum;
}

}  // namespace

double hartmann3(PointView x) { return hartmann(x, kHartmann3A, kHartmann3P); }

double hartmann6(PointView x) { return hartmann(x, kHartmann6A, kHartmann6P); }

double shekel10(PointView x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = x[j] - kShekelC[i][j];
            d2 += d * d;
        }
        sum += 1.0 / (d2 + kShekelBeta[i]);
    }
    return -sum;
}

}  // namespace raw

Point Benchmark::to_native(PointView unit) const {
    Point x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = domain[i].first + unit[i] * (domain[i].second - domain[i].first);
    }
    return x;
}

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names{"branin", "rosenbrock2", "hartmann3", "hartmann6",
                                                "shekel10"};
    return names;
}

namespace {

// Maxima and maximizers produced by tools/oracle/benchmark_optima.py (grid
// plus random probes plus bounded quasi-Newton refinement); Branin and
// Rosenbrock use their closed forms, which the oracle reproduces.
Benchmark make(std::string name, std::vector<std::pair<double, double>> domain,
               double (*fn)(PointView), double optimum_value, std::vector<Point> optima) {
    Benchmark b;
    b.name = std::move(name);
    b.dim = domain.size();
    b.domain = std::move(domain);
    b.optimum_value = optimum_value;
    b.optimum_points = std::move(optima);
    const auto dom = b.domain;
    b.eval = [dom, fn](PointView unit) {
        if (unit.size() != dom.size()) {
            throw std::invalid_argument("benchmark: expected dimension " +
                                        std::to_string(dom.size()));
        }
        std::array<double, 8> native{};
        for (std::size_t i = 0; i < dom.size(); ++i) {
            native[i] = dom[i].first + unit[i] * (dom[i].second - dom[i].first);
        }
        return -fn(PointView(native.data(), dom.size()));
    };
    return b;
}

}  // namespace

Benchmark get_benchmark(const std::string& name) {
    constexpr double pi = std::numbers::pi;
    if (name == "branin") {
        return make(name, {{-5.0, 10.0}, {0.0, 15.0}}, raw::branin, -5.0 / (4.0 * pi),
                    {{(5.0 - pi) / 15.0, 12.275 / 15.0},
                     {(5.0 + pi) / 15.0, 2.275 / 15.0},
                     {(5.0 + 3.0 * pi) / 15.0, 2.475 / 15.0}});
    }
    if (name == "rosenbrock2") {
        return make(name, {{-5.0, 10.0}, {-5.0, 10.0}}, raw::rosenbrock, 0.0, {{0.4, 0.4}});
    }
    if (name == "hartmann3") {
        return make(name, {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, raw::hartmann3,
                    3.8627797873326619,
                    {{0.11458889692354608, 0.55564889482628599, 0.85254698341714152}});
    }
    if (name == "hartmann6") {
        return make(name, std::vector<std::pair<double, double>>(6, {0.0, 1.0}), raw::hartmann6,
                    3.3223680114155121,
                    {{0.20168950722929324, 0.1500106886223577, 0.47687397109004837,
                      0.27533242686244491, 0.31165161133104763, 0.6573005301698247}});
    }
    if (name == "shekel10") {
        return make(name, std::vector<std::pair<double, double>>(4, {0.0, 10.0}), raw::shekel10,
                    10.53640981669191,
                    {{0.40007464986742819, 0.40005929439643029, 0.39996633897818751,
                      0.39995097911348088}});
    }
    std::string valid;
    for (const auto& n : benchmark_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown benchmark '" + name + "' (valid: " + valid + ")");
}

double log_regret(double optimum_value, double f_plus) {
    if (f_plus > optimum_value + 1e-9) {
        throw std::logic_error("log_regret: f_plus " + std::to_string(f_plus) +
                               " exceeds the stored optimum " + std::to_string(optimum_value));
    }
    return std::log10(std::max(optimum_value - f_plus, 1e-16));
}

double log_regret(const Benchmark& bench, double f_plus) {
    return log_regret(bench.optimum_value, f_plus);
}

}  // namespace optree
