#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <random>

#include "optree/kernel_gp.hpp"
#include "optree/verify.hpp"

using namespace optree;

namespace {

KernelSpec se1() { return KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 1.0, 1.0); }

struct Dataset {
    std::vector<Point> x;
    std::vector<double> f;
};

Dataset random_dataset(std::mt19937_64& rng, std::size_t dim, std::size_t t) {
    Dataset d;
    std::normal_distribution<double> z;
    for (std::size_t i = 0; i < t; ++i) {
        d.x.push_back(uniform_point(rng, dim));
        d.f.push_back(z(rng));
    }
    return d;
}

KernelSpec random_kernel(std::mt19937_64& rng, std::size_t dim, KernelFamily family) {
    std::uniform_real_distribution<double> u(0.1, 0.5);
    std::vector<double> ls(dim);
    for (double& l : ls) l = u(rng);
    return KernelSpec(family, ls, 0.5 + u(rng));
}

Eigen::VectorXd dense_weights(const KernelSpec& k, const Dataset& d, double jitter) {
    const auto t = static_cast<Eigen::Index>(d.x.size());
    Eigen::MatrixXd gram(t, t);
    Eigen::VectorXd f(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        for (Eigen::Index j = 0; j < t; ++j) gram(i, j) = k(d.x[i], d.x[j]);
        gram(i, i) += jitter;
        f[i] = d.f[i];
    }
    return gram.fullPivLu().solve(f);
}

// Posterior through an explicit pivoted LU solve of the jittered Gram matrix.
PosteriorStats dense_oracle(const KernelSpec& k, const Dataset& d, double jitter, PointView y) {
    const auto t = static_cast<Eigen::Index>(d.x.size());
    Eigen::MatrixXd gram(t, t);
    Eigen::VectorXd kv(t), f(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        for (Eigen::Index j = 0; j < t; ++j) gram(i, j) = k(d.x[i], d.x[j]);
        gram(i, i) += jitter;
        kv[i] = k(d.x[i], y);
        f[i] = d.f[i];
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    const double mean = kv.dot(lu.solve(f));
    const double var = k(y, y) - kv.dot(lu.solve(kv));
    return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace

TEST_CASE("kernel values") {
    const Point zero{0.0}, one{1.0};
    CHECK(se1()(zero, zero) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(se1()(zero, one) == doctest::Approx(0.606530659712633).epsilon(1e-14));

    const KernelSpec aniso(KernelFamily::SquaredExponential, {2.0, 1.0});
    CHECK(aniso(Point{0, 0}, Point{2, 0}) == doctest::Approx(aniso(Point{0, 0}, Point{0, 1})));

    const KernelSpec m(KernelFamily::Matern52, {0.5}, 2.0);
    CHECK(m(one, one) == doctest::Approx(2.0));
    // r = 1: a = sqrt(5), k = 2 (1 + sqrt5 + 5/3) exp(-sqrt5)
    const double a = std::sqrt(5.0);
    CHECK(m(Point{0.0}, Point{0.5}) == doctest::Approx(2.0 * (1 + a + 5.0 / 3.0) * std::exp(-a)));
}

TEST_CASE("kernel symmetry and bounds on random pairs") {
    std::mt19937_64 rng(3);
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        for (int i = 0; i < 200; ++i) {
            const std::size_t dim = 1 + i % 6;
            const KernelSpec k = random_kernel(rng, dim, family);
            const Point x = uniform_point(rng, dim), y = uniform_point(rng, dim);
            CHECK(k(x, y) == k(y, x));
            CHECK(k(x, y) > 0.0);
            CHECK(k(x, y) <= k(x, x));
            CHECK(k(x, x) == doctest::Approx(k.signal_variance()));
        }
    }
}

TEST_CASE("kernel argument validation") {
    CHECK_THROWS_AS(KernelSpec(KernelFamily::SquaredExponential, {}), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec(KernelFamily::SquaredExponential, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec(KernelFamily::SquaredExponential, {INFINITY}), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec(KernelFamily::SquaredExponential, {1.0}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(se1()(Point{0, 0}, Point{0}), std::invalid_argument);
    CHECK_THROWS_AS(se1()(Point{NAN}, Point{0}), std::invalid_argument);
    CHECK(kernel_family_from_string("matern52") == KernelFamily::Matern52);
    CHECK_THROWS_AS(kernel_family_from_string("rbf2"), std::invalid_argument);
}

TEST_CASE("lipschitz constants") {
    CHECK(lipschitz_constant(se1()) == doctest::Approx(1.0));
    CHECK(KernelSpec(KernelFamily::SquaredExponential, {0.5, 2.0}).lipschitz_constant() ==
          doctest::Approx(2.0));
    const KernelSpec base(KernelFamily::SquaredExponential, {0.3}, 1.0);
    const KernelSpec scaled(KernelFamily::SquaredExponential, {0.3}, 4.0);
    CHECK(scaled.lipschitz_constant() == doctest::Approx(2.0 * base.lipschitz_constant()));
    const KernelSpec m(KernelFamily::Matern52, {0.5}, 1.0);
    CHECK(m.lipschitz_constant() == doctest::Approx(std::sqrt(5.0 / 3.0) / 0.5));
}

TEST_CASE("fit edge cases") {
    const GpState empty = gp_fit(se1(), {}, {});
    CHECK(empty.size() == 0);
    const PosteriorStats prior = gp_posterior(empty, Point{0.3});
    CHECK(prior.mean == 0.0);
    CHECK(prior.std == doctest::Approx(1.0));

    const GpState one = gp_fit(se1(), {{0.5}}, {2.0});
    CHECK(one.factor().rows() == 1);
    CHECK(one.factor()(0, 0) == doctest::Approx(std::sqrt(1.0 + one.jitter())).epsilon(1e-15));

    CHECK_THROWS_AS(gp_fit(se1(), {{0.5}}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(gp_fit(se1(), {{0.5}, {0.5}}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(gp_fit(se1(), {{0.5}}, {NAN}), std::invalid_argument);
}

TEST_CASE("near-singular data escalates jitter or fails cleanly") {
    const KernelSpec k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 10.0);
    std::vector<Point> pts{{0.5}, {0.5 + 1e-7}, {0.5 + 2e-7}};
    try {
        const GpState gp = gp_fit(k, pts, {1.0, 1.0, 1.0});
        CHECK(gp.jitter() >= GpState::kInitialJitterScale);
        const PosteriorStats p = gp.posterior(Point{0.7});
        CHECK(std::isfinite(p.mean));
        CHECK(std::isfinite(p.std));
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("Cholesky") != std::string::npos);
    }
}

TEST_CASE("extend matches refit and interpolates") {
    const GpState empty(se1());
    const GpState one = gp_extend(empty, Point{0.3}, 1.5);
    CHECK(one.posterior(Point{0.3}).mean == doctest::Approx(1.5).epsilon(1e-9));

    CHECK_THROWS_AS(one.extend(Point{0.3 + 1e-13}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(one.extend(Point{0.4}, INFINITY), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t dim = 1 + trial % 6;
            const KernelSpec k = random_kernel(rng, dim, family);
            // Values drawn from the prior itself; white noise on clustered points is cond-limited.
            Dataset d = random_dataset(rng, dim, 1 + trial);
            GpPriorSample sample(k, static_cast<std::uint64_t>(trial));
            for (std::size_t i = 0; i < d.x.size(); ++i) d.f[i] = sample(d.x[i]);
            GpState inc(k);
            for (std::size_t i = 0; i < d.x.size(); ++i) inc = inc.extend(d.x[i], d.f[i]);
            const GpState batch = gp_fit(k, d.x, d.f, inc.jitter());
            for (int q = 0; q < 100; ++q) {
                const Point y = uniform_point(rng, dim);
                const PosteriorStats a = inc.posterior(y), b = batch.posterior(y);
                CHECK(std::abs(a.mean - b.mean) <= 1e-8);
                CHECK(std::abs(a.std - b.std) <= 1e-8);
            }
            // mu(x_i) = f_i - jitter * w_i exactly, so the interpolation gap is jitter-limited.
            const Eigen::VectorXd w = dense_weights(k, d, inc.jitter());
            for (std::size_t i = 0; i < d.x.size(); ++i) {
                const PosteriorStats p = inc.posterior(d.x[i]);
                CHECK(std::abs(p.mean - d.f[i]) <= 1e-6 + inc.jitter() * std::abs(w[i]));
                CHECK(p.std <= 1e-3 * std::sqrt(k.signal_variance()));
            }
        }
    }
}

TEST_CASE("interpolates at well separated points") {
    const KernelSpec k = KernelSpec::isotropic(KernelFamily::Matern52, 2, 0.3, 2.0);
    Dataset d;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            d.x.push_back({0.1 + 0.2 * i, 0.1 + 0.2 * j});
            d.f.push_back(std::sin(3.0 * i) + std::cos(2.0 * j));
        }
    }
    const GpState gp = gp_fit(k, d.x, d.f);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const PosteriorStats p = gp.posterior(d.x[i]);
        CHECK(std::abs(p.mean - d.f[i]) <= 1e-6);
        CHECK(p.std <= 1e-3 * std::sqrt(2.0));
    }
}

TEST_CASE("posterior matches a dense pivoted solve") {
    std::mt19937_64 rng(5);
    const KernelSpec k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 2, 0.4);
    const Dataset d = random_dataset(rng, 2, 5);
    const GpState gp = gp_fit(k, d.x, d.f);
    for (int q = 0; q < 20; ++q) {
        const Point y = uniform_point(rng, 2);
        const PosteriorStats a = gp.posterior(y), b = dense_oracle(k, d, gp.jitter(), y);
        CHECK(std::abs(a.mean - b.mean) <= 1e-8);
        CHECK(std::abs(a.std - b.std) <= 1e-8);
    }
}

TEST_CASE("factor reconstructs the jittered Gram matrix") {
    std::mt19937_64 rng(8);
    const KernelSpec k = KernelSpec::isotropic(KernelFamily::Matern52, 3, 0.5);
    const Dataset d = random_dataset(rng, 3, 12);
    const GpState gp = gp_fit(k, d.x, d.f);
    const Eigen::MatrixXd& L = gp.factor();
    const Eigen::MatrixXd rebuilt = L * L.transpose();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        CHECK(L(i, i) > 0.0);
        for (Eigen::Index j = i + 1; j < L.cols(); ++j) CHECK(L(i, j) == 0.0);
        for (Eigen::Index j = 0; j < L.cols(); ++j) {
            const double expect = k(d.x[i], d.x[j]) + (i == j ? gp.jitter() : 0.0);
            CHECK(rebuilt(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("extending never increases the posterior std") {
    std::mt19937_64 rng(21);
    const KernelSpec k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 2, 0.3);
    std::vector<Point> queries;
    for (int q = 0; q < 30; ++q) queries.push_back(uniform_point(rng, 2));
    GpState gp(k);
    std::vector<double> prev(queries.size(), std::sqrt(k.signal_variance()));
    for (int step = 0; step < 25; ++step) {
        gp = gp.extend(uniform_point(rng, 2), std::normal_distribution<double>()(rng));
        for (std::size_t q = 0; q < queries.size(); ++q) {
            const double s = gp.posterior(queries[q]).std;
            CHECK(s <= prev[q] + 1e-8);
            CHECK(s >= 0.0);
            CHECK(s <= std::sqrt(k.signal_variance()) + 1e-12);
            prev[q] = s;
        }
    }
}

TEST_CASE("posterior input validation") {
    const GpState gp = gp_fit(se1(), {{0.1}}, {0.0});
    CHECK_THROWS_AS(gp.posterior(Point{NAN}), std::invalid_argument);
    CHECK_THROWS_AS(gp.posterior(Point{0.1, 0.2}), std::invalid_argument);
    CHECK(gp.min_distance(Point{0.4}) == doctest::Approx(0.3));
    CHECK(gp.find_duplicate(Point{0.1}).value() == 0);
}
