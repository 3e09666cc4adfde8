#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "icalign/linalg.hpp"
#include "icalign/rng.hpp"
#include "support/oracle.hpp"

using namespace icalign;

namespace {

CMat random_hermitian(Rng& rng, int n) {
    const CMat g = rng.cgauss_matrix(n, n);
    return (g + g.adjoint()).hermitize();
}

CMat random_hpd(Rng& rng, int n) {
    const CMat g = rng.cgauss_matrix(n, n);
    return (g * g.adjoint() + CMat::identity(n) * 0.5).hermitize();
}

double eig_residual(const CMat& a, const HermEig& e) {
    double worst = 0.0;
    for (int j = 0; j < a.rows(); ++j) {
        const CMat v = e.vectors.col(j);
        worst = std::max(worst, (a * v - v * e.values[j]).norm_f());
    }
    return worst;
}

} // namespace

TEST_CASE("herm_eig: identity and diagonal cases") {
    const HermEig ei = herm_eig(CMat::identity(2));
    CHECK(ei.values[0] == Catch::Approx(1.0));
    CHECK(ei.values[1] == Catch::Approx(1.0));
    CHECK(ei.ties); // degenerate pair must be flagged
    CHECK((ei.vectors.adjoint() * ei.vectors - CMat::identity(2)).max_abs() < 1e-10);

    const HermEig ed = herm_eig(CMat(2, 2, {cplx(3), cplx(0), cplx(0), cplx(1)}));
    CHECK(ed.values[0] == Catch::Approx(1.0));
    CHECK(ed.values[1] == Catch::Approx(3.0));
    // Ascending order puts e2 first; phase fixing makes the pivots +1.
    CHECK(std::abs(ed.vectors(1, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(ed.vectors(0, 1) - cplx(1.0)) < 1e-12);
}

TEST_CASE("herm_eig: residual, orthonormality, trace on random matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + (trial % 5);
        const CMat a = random_hermitian(rng, n);
        const HermEig e = herm_eig(a);
        CHECK(eig_residual(a, e) <= 1e-8 * a.norm_f());
        CHECK((e.vectors.adjoint() * e.vectors - CMat::identity(n)).max_abs() < 1e-10);
        double sum = 0.0;
        for (double v : e.values) sum += v;
        CHECK(std::abs(sum - a.trace().real()) <= 1e-8 * a.norm_f());
        for (size_t i = 1; i < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i - 1]);
    }
}

TEST_CASE("herm_eig: deterministic for identical input bits") {
    Rng rng(7);
    const CMat a = random_hermitian(rng, 4);
    const HermEig e1 = herm_eig(a);
    const HermEig e2 = herm_eig(a);
    for (int i = 0; i < 4; ++i) CHECK(e1.values[i] == e2.values[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(e1.vectors(i, j) == e2.vectors(i, j));
}

TEST_CASE("herm_eig: contract violations") {
    CHECK_THROWS_AS(herm_eig(CMat(2, 3)), ContractViolation);
    CMat bad = CMat::identity(2);
    bad(0, 1) = cplx(0.5, 0.0); // asymmetric
    CHECK_THROWS_AS(herm_eig(bad), ContractViolation);
}

TEST_CASE("herm_eig: zero matrix falls back to canonical basis") {
    const HermEig e = herm_eig(CMat::zeros(3, 3));
    CHECK(e.ties);
    CHECK((e.vectors - CMat::identity(3)).max_abs() == 0.0);
}

TEST_CASE("gen_herm_eig_max: closed-form cases") {
    const auto p1 = gen_herm_eig_max(CMat(2, 2, {cplx(2), cplx(0), cplx(0), cplx(1)}),
                                     CMat::identity(2));
    CHECK(p1.value == Catch::Approx(2.0));
    CHECK(std::abs(p1.vector(0, 0) - cplx(1.0)) < 1e-10);

    const auto p2 = gen_herm_eig_max(CMat::identity(2),
                                     CMat(2, 2, {cplx(4), cplx(0), cplx(0), cplx(1)}));
    CHECK(p2.value == Catch::Approx(1.0));
    CHECK(std::abs(p2.vector(1, 0) - cplx(1.0)) < 1e-10);
}

TEST_CASE("gen_herm_eig_max: beats random unit vectors and meets the residual bound") {
    Rng rng(23);
    oracle::PolarGauss orng(91);
    for (int trial = 0; trial < 3; ++trial) {
        const int n = 3 + trial;
        const CMat a = random_hermitian(rng, n);
        const CMat b = random_hpd(rng, n);
        const auto p = gen_herm_eig_max(a, b);
        CHECK((a * p.vector - b * p.vector * p.value).norm_f() <=
              1e-8 * (a.norm_f() + b.norm_f()));
        CHECK(std::abs(p.vector.norm_f() - 1.0) < 1e-12);
        const auto quotient = [&](const CMat& v) {
            return (v.adjoint() * a * v)(0, 0).real() / (v.adjoint() * b * v)(0, 0).real();
        };
        const double sampled = oracle::random_feasible_search(
            quotient, oracle::FeasibleSet::unit_sphere(n), 100000, orng, /*maximize=*/true);
        CHECK(p.value >= sampled - 1e-9);
    }
}

TEST_CASE("gen_herm_eig_max: agrees with herm_eig when B = I") {
    Rng rng(5);
    const CMat a = random_hermitian(rng, 4);
    const auto p = gen_herm_eig_max(a, CMat::identity(4));
    const HermEig e = herm_eig(a);
    CHECK(std::abs(p.value - e.values.back()) < 1e-10);
    const CMat v = e.vectors.col(3);
    CHECK(std::abs(std::abs(dot(v, p.vector)) - 1.0) < 1e-10); // colinear up to phase
}

TEST_CASE("gen_herm_eig_max: singular B is reported by name") {
    const CMat a = CMat::identity(2);
    const CMat b = CMat(2, 2, {cplx(1), cplx(0), cplx(0), cplx(0)});
    CHECK_THROWS_AS(gen_herm_eig_max(a, b, "denominator"), SingularMatrix);
    try {
        gen_herm_eig_max(a, b, "denominator");
    } catch (const SingularMatrix& e) {
        CHECK(std::string(e.what()).find("denominator") != std::string::npos);
    }
}

TEST_CASE("svd: identity and rank-one cases") {
    const Svd si = svd(CMat::identity(3));
    for (double s : si.sigma) CHECK(s == Catch::Approx(1.0));

    Rng rng(3);
    const CMat u = rng.cgauss_matrix(4, 1);
    const CMat v = rng.cgauss_matrix(3, 1);
    const Svd s1 = svd(outer(u, v));
    int above = 0;
    for (double s : s1.sigma)
        if (s > 1e-12) ++above;
    CHECK(above == 1);
}

TEST_CASE("svd: reconstruction and orthonormal factors on random input") {
    Rng rng(17);
    for (auto [m, n] : {std::pair{4, 2}, std::pair{2, 4}, std::pair{5, 5}}) {
        const CMat a = rng.cgauss_matrix(m, n);
        const Svd s = svd(a);
        const int r = std::min(m, n);
        CMat usv(m, n);
        for (int k = 0; k < r; ++k) usv += outer(s.u.col(k), s.v.col(k)) * s.sigma[k];
        CHECK((usv - a).norm_f() <= 1e-9 * a.norm_f());
        CHECK((s.u.adjoint() * s.u - CMat::identity(r)).max_abs() < 1e-10);
        CHECK((s.v.adjoint() * s.v - CMat::identity(r)).max_abs() < 1e-10);
        for (int k = 1; k < r; ++k) CHECK(s.sigma[k] <= s.sigma[k - 1]);
        CHECK(s.sigma[r - 1] >= 0.0);
    }
}

TEST_CASE("solve_hpd: closed forms, residual, singularity") {
    Rng rng(29);
    const CMat y = rng.cgauss_matrix(3, 2);
    CHECK((solve_hpd(CMat::identity(3), y) - y).max_abs() < 1e-14);
    CHECK((solve_hpd(CMat::identity(2) * 2.0, CMat::identity(2)) - CMat::identity(2) * 0.5)
              .max_abs() < 1e-14);

    const CMat b = random_hpd(rng, 4);
    const CMat y2 = rng.cgauss_matrix(4, 3);
    const CMat x = solve_hpd(b, y2);
    CHECK((b * x - y2).norm_f() <= 1e-9 * y2.norm_f());

    CHECK_THROWS_AS(solve_hpd(CMat::zeros(2, 2), CMat::identity(2), "Z"), SingularMatrix);
}

TEST_CASE("orthonormalize: idempotence, spans, rank deficiency") {
    Rng rng(31);
    const CMat q0 = orthonormalize(rng.cgauss_matrix(4, 2));
    CHECK((orthonormalize(q0) - q0).max_abs() < 1e-12);

    const CMat a = CMat(2, 2, {cplx(1), cplx(1), cplx(0), cplx(1)}); // [e1, e1+e2]
    const CMat q1 = orthonormalize(a);
    CHECK((q1.adjoint() * q1 - CMat::identity(2)).max_abs() < 1e-10);
    CHECK(projector_distance(q1, CMat::identity(2)) < 1e-10);

    const CMat g = rng.cgauss_matrix(4, 2);
    const CMat q2 = orthonormalize(g);
    CHECK((q2.adjoint() * q2 - CMat::identity(2)).max_abs() < 1e-10);
    // Same span: the orthonormalized basis of g reproduces g's projector.
    const Svd s = svd(g);
    CHECK(projector_distance(q2, s.u.first_cols(2)) < 1e-10);

    CMat def(3, 2);
    def(0, 0) = 1.0;
    def(0, 1) = 2.0; // second column parallel to the first
    CHECK_THROWS_AS(orthonormalize(def), ContractViolation);
    CHECK_THROWS_AS(orthonormalize(CMat(2, 3)), ContractViolation);
}

TEST_CASE("hpd_inv_sqrt: squares back to the inverse") {
    Rng rng(37);
    const CMat a = random_hpd(rng, 3);
    const CMat w = hpd_inv_sqrt(a);
    CHECK((w * a * w - CMat::identity(3)).max_abs() < 1e-10);
}

TEST_CASE("solve_general and eig_general on random matrices") {
    Rng rng(41);
    const CMat a = rng.cgauss_matrix(4, 4);
    const CMat b = rng.cgauss_matrix(4, 2);
    const CMat x = solve_general(a, b);
    CHECK((a * x - b).norm_f() <= 1e-10 * b.norm_f());
    CHECK_THROWS_AS(solve_general(CMat::zeros(3, 3), CMat::identity(3)), SingularMatrix);

    for (int n : {2, 3, 4, 6}) {
        const CMat m = rng.cgauss_matrix(n, n);
        const EigGeneral e = eig_general(m);
        for (int j = 0; j < n; ++j) {
            const CMat v = e.vectors.col(j);
            CHECK((m * v - v * e.values[j]).norm_f() <= 1e-8 * m.norm_f());
            CHECK(std::abs(v.norm_f() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("eig_general: diagonal input returns its entries") {
    CMat d(3, 3);
    d(0, 0) = cplx(1, 2);
    d(1, 1) = cplx(-3, 0.5);
    d(2, 2) = cplx(0, -1);
    const EigGeneral e = eig_general(d);
    std::vector<cplx> want = {cplx(1, 2), cplx(-3, 0.5), cplx(0, -1)};
    for (const cplx& w : want) {
        bool found = false;
        for (const cplx& v : e.values)
            if (std::abs(v - w) < 1e-10) found = true;
        CHECK(found);
    }
}
