#include <catch2/catch_amalgamated.hpp>

#include "icalign/linalg.hpp"
#include "icalign/rng.hpp"
#include "support/oracle.hpp"

using namespace icalign;

TEST_CASE("finite_diff_gradient: linear field is exact") {
    oracle::PolarGauss rng(1);
    const CMat a = rng.cgauss_matrix(3, 2);
    const auto f = [&](const CMat& x) {
        double s = 0.0;
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j)
                s += a(i, j).real() * x(i, j).real() + a(i, j).imag() * x(i, j).imag();
        return s;
    };
    const CMat x0 = rng.cgauss_matrix(3, 2);
    const CMat g = oracle::finite_diff_gradient(f, x0);
    CHECK((g - a).max_abs() < 1e-9);
}

TEST_CASE("finite_diff_gradient: quadratic field") {
    oracle::PolarGauss rng(2);
    const auto f = [](const CMat& x) {
        const double n = x.norm_f();
        return n * n;
    };
    const CMat x0 = rng.cgauss_matrix(2, 2);
    const CMat g = oracle::finite_diff_gradient(f, x0);
    CHECK((g - x0 * 2.0).max_abs() < 1e-7);
}

TEST_CASE("random_feasible_search: one complex dimension is exhaustive") {
    oracle::PolarGauss rng(3);
    // |v_0|^2 is constant on the unit circle, so any sample is the optimum.
    const auto f = [](const CMat& v) { return std::norm(v(0, 0)); };
    const double best = oracle::random_feasible_search(f, oracle::FeasibleSet::unit_sphere(1), 2,
                                                       rng, true);
    CHECK(best == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("random_feasible_search: gap to the known optimum shrinks with samples") {
    Rng lrng(4);
    const CMat g = lrng.cgauss_matrix(3, 3);
    const CMat a = (g * g.adjoint()).hermitize();
    const HermEig e = herm_eig(a);
    const double truth = e.values.front();
    const auto quad = [&](const CMat& v) { return (v.adjoint() * a * v)(0, 0).real(); };
    oracle::PolarGauss r1(5), r2(5);
    const double few = oracle::random_feasible_search(quad, oracle::FeasibleSet::unit_sphere(3),
                                                      100, r1, false);
    const double many = oracle::random_feasible_search(quad, oracle::FeasibleSet::unit_sphere(3),
                                                       20000, r2, false);
    CHECK(many <= few);
    CHECK(many - truth < 0.25 * (e.values.back() - truth));
    CHECK(few >= truth - 1e-12); // sampling never beats the analytic optimum
}

TEST_CASE("mc_expectation: constant statistic is exact") {
    oracle::PolarGauss rng(6);
    const auto est = oracle::mc_expectation([](oracle::PolarGauss&) { return 2.5; }, 100, rng);
    CHECK(est.mean == Catch::Approx(2.5));
    CHECK(est.se == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("mc_expectation: E||s||^2 = 2 for two unit-variance symbols") {
    oracle::PolarGauss rng(7);
    const auto est = oracle::mc_expectation(
        [](oracle::PolarGauss& r) {
            const CMat s = r.cgauss_matrix(2, 1);
            const double n = s.norm_f();
            return n * n;
        },
        20000, rng);
    CHECK(std::abs(est.mean - 2.0) <= 3.0 * est.se);
}

TEST_CASE("naive_orthonormal produces orthonormal columns") {
    oracle::PolarGauss rng(8);
    const CMat q = oracle::naive_orthonormal(rng.cgauss_matrix(4, 3));
    CHECK((q.adjoint() * q - CMat::identity(3)).max_abs() < 1e-12);
}

TEST_CASE("logdet_naive agrees with closed forms") {
    CMat d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    CHECK(oracle::logdet_naive(d) == Catch::Approx(std::log(6.0)));
    Rng lrng(9);
    const CMat g = lrng.cgauss_matrix(3, 3);
    const CMat a = (g * g.adjoint() + CMat::identity(3)).hermitize();
    CHECK(oracle::logdet_naive(a) == Catch::Approx(logdet_hpd(a)).epsilon(1e-10));
}
