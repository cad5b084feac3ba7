#include <doctest.h>

#include <cmath>

#include "optree/verify.hpp"

using namespace optree;

TEST_CASE("prior samples are consistent and standard normal") {
    const auto k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 0.1);
    GpPriorSample f(k, 3);
    const double a = f(Point{0.2});
    CHECK(f(Point{0.2}) == a);
    CHECK(f.revealed() == 1);

    double sum = 0.0, sum2 = 0.0;
    const int n = 4000;
    for (int s = 0; s < n; ++s) {
        GpPriorSample g(k, static_cast<std::uint64_t>(s));
        const double v = g(Point{0.5});
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(sum / n) < 0.06);
    CHECK(std::abs(sum2 / n - 1.0) < 0.08);

    // Nearby values of one sample are strongly correlated.
    double diff2 = 0.0;
    for (int s = 0; s < 500; ++s) {
        GpPriorSample g(k, static_cast<std::uint64_t>(s));
        const double d = g(Point{0.5}) - g(Point{0.51});
        diff2 += d * d;
    }
    CHECK(diff2 / 500 < 0.05);
}

TEST_CASE("log-log slope") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::sqrt(v));
    CHECK(loglog_slope(x, y) == doctest::Approx(0.5));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(loglog_slope({1.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("suites pass at smoke scale") {
    for (const auto& r : run_verify_suite("all", 10, 0)) {
        INFO(r.suite);
        CHECK(r.passed);
    }
    CHECK_THROWS_AS(run_verify_suite("nope", 1, 0), std::invalid_argument);
}

TEST_CASE("coverage check has teeth") {
    // Functions far rougher than the model believes.
    CoverageOptions wrong;
    wrong.prior_lengthscale = 0.02;
    wrong.budget = 10;
    const SuiteReport r = verify_coverage_bamsoo(40, 1, wrong);
    MESSAGE("misspecified coverage failures: " << r.failures << "/40");
    CHECK(r.failures > 10);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(verify_coverage_gpucb(40, 1, wrong).passed);
}

TEST_CASE("variance bound suite") {
    const SuiteReport r = verify_variance_bound(300, 9);
    CHECK(r.passed);
    CHECK(r.failures == 0);
}
