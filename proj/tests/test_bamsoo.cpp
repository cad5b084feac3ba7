#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "optree/bamsoo.hpp"
#include "optree/benchmarks.hpp"

using namespace optree;

namespace {

double wave(PointView x) { return 0.5 * std::sin(15 * x[0]) * std::sin(27 * x[0]); }

// eta for which B_1 = b.
double eta_for_first_width(double b) {
    return std::numbers::pi * std::numbers::pi / (6.0 * std::exp(b * b / 2.0));
}

}  // namespace

TEST_CASE("confidence widths") {
    CHECK(b_n(ConfidenceSchedule(0.05), 10) == doctest::Approx(4.0245751979588672).epsilon(1e-13));
    CHECK(b_n(ConfidenceSchedule(0.5), 1) == doctest::Approx(1.5432741059388579).epsilon(1e-13));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1e-6, 0.999);
    for (int i = 0; i < 200; ++i) {
        const ConfidenceSchedule s(u(rng));
        const std::size_t n = 1 + rng() % 100000;
        CHECK(s.width(2 * n) > s.width(n));
    }
    CHECK_THROWS_AS(ConfidenceSchedule(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ConfidenceSchedule(1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConfidenceSchedule(0.5).width(0), std::invalid_argument);
}

TEST_CASE("gate evaluates when the UCB reaches the incumbent") {
    const double eta = eta_for_first_width(2.0);
    BamsooState st(1, KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 0.2, 1.0),
                   ConfidenceSchedule(eta));
    st.f_plus = 1.5;
    int calls = 0;
    GateRecord seen;
    const GateOutcome out = evaluate_or_bound(
        st, [&](PointView) { ++calls; return 0.7; }, root_cell(1),
        [&](const GateRecord& r) { seen = r; });
    CHECK(calls == 1);
    CHECK(out.evaluated);
    CHECK(out.g == 0.7);
    CHECK(seen.b == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(seen.upper == doctest::Approx(2.0));
    CHECK(st.N == 1);
    CHECK(st.t == 1);
    CHECK(st.gp.size() == 1);
    CHECK(st.f_plus == 1.5);
}

TEST_CASE("gate assigns the LCB otherwise") {
    const double eta = eta_for_first_width(2.0);
    BamsooState st(1, KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 0.2, 0.01),
                   ConfidenceSchedule(eta));
    st.f_plus = 1.5;
    int calls = 0;
    const GateOutcome out =
        evaluate_or_bound(st, [&](PointView) { ++calls; return 0.0; }, root_cell(1));
    CHECK(calls == 0);
    CHECK_FALSE(out.evaluated);
    CHECK(out.g == doctest::Approx(-0.2));
    CHECK(st.f_plus == 1.5);
    CHECK(st.t == 0);
    CHECK(st.gp.size() == 0);
}

TEST_CASE("budget of one evaluates only the random point") {
    SooConfig c;
    c.budget = 1;
    c.dim = 2;
    const auto k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 2, 0.2);
    const RunTrace tr = bamsoo_run([](PointView x) { return x[0]; }, c, ConfidenceSchedule(), k, 9);
    REQUIRE(tr.records.size() == 1);
    CHECK(tr.best_f == tr.records[0].x[0]);
    CHECK(tr.tree_nodes == 0);
}

TEST_CASE("gate log replays against the data at gate time") {
    const Benchmark b = get_benchmark("branin");
    SooConfig c;
    c.budget = 60;
    c.dim = 2;
    const auto k = KernelSpec::isotropic(KernelFamily::Matern52, 2, 0.2, 0.1);
    std::vector<GateRecord> log;
    BamsooOptions opts;
    opts.gate_log = &log;
    const RunTrace tr = bamsoo_run(b.eval, c, ConfidenceSchedule(0.05), k, 3, opts);
    REQUIRE_FALSE(log.empty());

    std::size_t gated = 0;
    double f_plus = log.front().f_plus;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const GateRecord& r = log[i];
        CHECK(r.N == log.front().N + i);
        CHECK(r.t <= r.N);
        CHECK(r.f_plus >= f_plus);
        f_plus = r.f_plus;
        CHECK(r.evaluated == (r.upper >= r.f_plus));
        if (!r.evaluated) {
            ++gated;
            CHECK(r.g == r.lower);
        }
        // Rebuild the posterior from the first r.t true evaluations.
        GpState gp(k);
        for (std::size_t j = 0; j < r.t; ++j) gp = gp.extend(tr.records[j].x, tr.records[j].f);
        const PosteriorStats p = gp.posterior(r.x);
        CHECK(p.mean == doctest::Approx(r.mu).epsilon(1e-9));
        CHECK(p.std == doctest::Approx(r.sigma).epsilon(1e-9));
        CHECK(r.b == ConfidenceSchedule(0.05).width(r.N));
    }
    CHECK(gated > 0);
    CHECK(tr.records.size() <= c.budget + 1);
    CHECK(tr.bound_checks >= tr.records.size());

    std::ostringstream csv;
    write_gate_log_csv(csv, log);
    CHECK(csv.str().rfind("N,level,index,mu,sigma,B_N,U,L,f_plus,decision\n", 0) == 0);
    CHECK(csv.str().find(",bound\n") != std::string::npos);
}

TEST_CASE("gating covers more of the space than SOO at equal evaluations") {
    SooConfig c;
    c.budget = 20;
    c.dim = 1;
    const auto k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 1, 0.2);
    const RunTrace soo = soo_run(wave, c);
    const RunTrace bam = bamsoo_run(wave, c, ConfidenceSchedule(0.05), k, 0);
    CHECK(bam.records.size() <= 21);
    CHECK(bam.tree_nodes > soo.tree_nodes);
}

TEST_CASE("seeded runs are reproducible") {
    const Benchmark b = get_benchmark("hartmann3");
    SooConfig c;
    c.budget = 40;
    c.dim = 3;
    const auto k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 3, 0.2);
    const auto a = bamsoo_run(b.eval, c, ConfidenceSchedule(), k, 4);
    CHECK(trace_fingerprint(a) == trace_fingerprint(bamsoo_run(b.eval, c, ConfidenceSchedule(), k, 4)));
    CHECK(trace_fingerprint(a) != trace_fingerprint(bamsoo_run(b.eval, c, ConfidenceSchedule(), k, 5)));
}

TEST_CASE("kernel dimension must match") {
    SooConfig c;
    c.dim = 2;
    const auto k = KernelSpec::isotropic(KernelFamily::SquaredExponential, 3, 0.2);
    CHECK_THROWS_AS(bamsoo_run([](PointView) { return 0.0; }, c, ConfidenceSchedule(), k, 0),
                    std::invalid_argument);
}
