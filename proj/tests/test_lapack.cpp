#include <cmath>

#include "ampblas/blas12.hpp"
#include "ampblas/lapack.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace ampblas;

namespace {
const MachineModel& machine() {
    static MachineModel m = [] {
        MachineModel mm;
        mm.classes.push_back({"fast", 2, 6.0, 24, 16});
        mm.classes.push_back({"slow", 2, 1.0, 8, 8});
        return mm;
    }();
    return m;
}

BlockingParams small_blocking() {
    BlockingParams p;
    p.kc = 32;
    p.nc = 64;
    p.mc_by_class = {24, 8};
    p.small_m_mc_by_class = {16, 8};
    return p;
}

LapackConfig small_cfg() { return {32, 8}; }
}  // namespace

TEST_CASE("householder examples") {
    std::vector<double> e1 = {1.0, 0.0, 0.0};
    Householder h = householder(ConstVecView{e1.data(), 3, 1});
    CHECK(h.tau == 0.0);
    CHECK(h.beta == 1.0);

    std::vector<double> x34 = {3.0, 4.0};
    Householder h2 = householder(ConstVecView{x34.data(), 2, 1});
    CHECK(std::fabs(h2.beta) == doctest::Approx(5.0));
    CHECK(h2.beta < 0.0);  // opposite sign to x[0]

    CHECK_THROWS_AS(householder(ConstVecView{nullptr, 0, 1}), dimension_error);
}

TEST_CASE("householder annihilates below the first entry") {
    for (int t = 0; t < 20; ++t) {
        DenseMatrix xm = make_uniform(9, 1, 400 + t, -1.0, 1.0);
        Householder h = householder(xm.col(0));
        // apply H = I - tau v v^T explicitly
        double vx = 0.0, xnorm = 0.0;
        for (index_t i = 0; i < 9; ++i) {
            vx += h.v[i] * xm(i, 0);
            xnorm += xm(i, 0) * xm(i, 0);
        }
        xnorm = std::sqrt(xnorm);
        std::vector<double> hx(9);
        for (index_t i = 0; i < 9; ++i) hx[i] = xm(i, 0) - h.tau * h.v[i] * vx;
        CHECK(std::fabs(hx[0] - h.beta) <= 1e-14 * xnorm);
        for (index_t i = 1; i < 9; ++i) CHECK(std::fabs(hx[i]) <= 1e-14 * xnorm);
        CHECK(std::fabs(std::fabs(h.beta) - xnorm) <= 1e-13 * xnorm);
    }
}

TEST_CASE("potrf 2x2 by hand") {
    DenseMatrix a(2, 2);
    a(0, 0) = 4.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 5.0;
    potrf(a.view(), LapackConfig{}, machine());
    CHECK(a(0, 0) == doctest::Approx(2.0));
    CHECK(a(0, 1) == doctest::Approx(1.0));
    CHECK(a(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("potrf of the identity is the identity") {
    DenseMatrix a = DenseMatrix::identity(40);
    potrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
    for (index_t j = 0; j < 40; ++j)
        for (index_t i = 0; i <= j; ++i) CHECK(a(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("potrf reconstruction across sizes") {
    for (index_t n : {1, 2, 3, 5, 7, 8, 13, 16, 100, 300}) {
        DenseMatrix a = make_spd(n, 1000 + n);
        DenseMatrix a0(n, n);
        copy_into(a0.view(), a.view());
        potrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
        CHECK(test::potrf_reconstruction_error(a0.view(), a.view()) <= 1e-12);
    }
    // default nb=256 path on a mid-size problem
    DenseMatrix a = make_spd(500, 3);
    DenseMatrix a0(500, 500);
    copy_into(a0.view(), a.view());
    potrf(a.view(), LapackConfig{}, machine());
    CHECK(test::potrf_reconstruction_error(a0.view(), a.view()) <= 1e-12);
}

TEST_CASE("potrf reports the first non-positive pivot") {
    DenseMatrix a = make_spd(12, 4);
    a(7, 7) = -100.0;  // breaks definiteness at index 7
    try {
        potrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
        FAIL("expected not_positive_definite_error");
    } catch (const not_positive_definite_error& e) {
        CHECK(e.index == 7);
    }
}

TEST_CASE("getrf one-step hand pivoting") {
    DenseMatrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    GetrfResult r = getrf(a.view(), LapackConfig{}, machine());
    CHECK(r.info == 0);
    REQUIRE(r.pivots.ipiv.size() == 2);
    CHECK(r.pivots.ipiv[0] == 2);
    CHECK(r.pivots.ipiv[1] == 2);
    // P A = I, so the stored LU is the identity arrangement
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 1) == 1.0);
    CHECK(a(1, 0) == 0.0);
    CHECK(a(0, 1) == 0.0);
}

TEST_CASE("getrf of the identity") {
    DenseMatrix a = DenseMatrix::identity(30);
    GetrfResult r = getrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
    CHECK(r.info == 0);
    for (index_t i = 0; i < 30; ++i) CHECK(r.pivots.ipiv[i] == i + 1);
    for (index_t j = 0; j < 30; ++j)
        for (index_t i = 0; i < 30; ++i) CHECK(a(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("getrf reconstruction across sizes") {
    for (index_t n : {1, 2, 3, 5, 8, 13, 16, 100, 300}) {
        DenseMatrix a = make_uniform(n, n, 2000 + n);
        DenseMatrix a0(n, n);
        copy_into(a0.view(), a.view());
        GetrfResult r = getrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
        CHECK(r.info == 0);
        for (index_t i = 0; i < n; ++i) CHECK(r.pivots.ipiv[i] >= i + 1);
        CHECK(test::getrf_reconstruction_error(a0.view(), a.view(), r.pivots.ipiv) <= 1e-11);
    }
    DenseMatrix a = make_uniform(400, 400, 77);
    DenseMatrix a0(400, 400);
    copy_into(a0.view(), a.view());
    GetrfResult r = getrf(a.view(), LapackConfig{}, machine());
    CHECK(test::getrf_reconstruction_error(a0.view(), a.view(), r.pivots.ipiv) <= 1e-11);
}

TEST_CASE("getrf handles tall and wide matrices") {
    for (auto [m, n] : {std::pair<index_t, index_t>{90, 40}, {40, 90}, {65, 64}}) {
        DenseMatrix a = make_uniform(m, n, 3000 + m + n);
        DenseMatrix a0(m, n);
        copy_into(a0.view(), a.view());
        GetrfResult r = getrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
        CHECK(r.info == 0);
        CHECK(static_cast<index_t>(r.pivots.ipiv.size()) == std::min(m, n));
        CHECK(test::getrf_reconstruction_error(a0.view(), a.view(), r.pivots.ipiv) <= 1e-11);
    }
}

TEST_CASE("getrf flags an exactly singular column through info") {
    DenseMatrix a = make_uniform(10, 10, 5);
    for (index_t i = 0; i < 10; ++i) a(i, 4) = 0.0;  // zero column
    GetrfResult r = getrf(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
    CHECK(r.info == 5);  // 1-based column of the zero pivot
    CHECK(r.pivots.ipiv.size() == 10);
}

TEST_CASE("laswp examples") {
    DenseMatrix a = make_uniform(4, 3, 9);
    DenseMatrix a0(4, 3);
    copy_into(a0.view(), a.view());
    laswp(a.view(), {1, 2, 3, 4}, 0, 4);  // identity pivots
    CHECK(rel_error(a.view(), a0.view()) == 0.0);

    laswp(a.view(), {2, 2}, 0, 2);  // swap rows 0,1 then fix row 1
    CHECK(a(0, 0) == a0(1, 0));
    CHECK(a(1, 0) == a0(0, 0));

    // single-swap vectors are involutive when replayed forward twice
    copy_into(a.view(), a0.view());
    laswp(a.view(), {3, 2, 3, 4}, 0, 1);
    laswp(a.view(), {3, 2, 3, 4}, 0, 1);
    CHECK(rel_error(a.view(), a0.view()) == 0.0);

    CHECK_THROWS_AS(laswp(a.view(), {9}, 0, 1), std::out_of_range);
}

TEST_CASE("sytrd n=1") {
    DenseMatrix a(1, 1);
    a(0, 0) = 4.25;
    ReflectorSet r = sytrd(a.view(), LapackConfig{}, machine());
    REQUIRE(r.d.size() == 1);
    CHECK(r.d[0] == 4.25);
    CHECK(r.e.empty());
    CHECK(r.tau.empty());
}

TEST_CASE("sytrd of an already tridiagonal matrix reads off d and e") {
    const index_t n = 10;
    DenseMatrix a(n, n);
    for (index_t i = 0; i < n; ++i) a(i, i) = 2.0 + 0.1 * static_cast<double>(i);
    for (index_t i = 0; i + 1 < n; ++i) {
        a(i, i + 1) = -1.0 + 0.05 * static_cast<double>(i);
        a(i + 1, i) = a(i, i + 1);
    }
    DenseMatrix a0(n, n);
    copy_into(a0.view(), a.view());
    ReflectorSet r = sytrd(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
    for (index_t i = 0; i < n; ++i) CHECK(r.d[i] == doctest::Approx(a0(i, i)).epsilon(1e-12));
    for (index_t i = 0; i + 1 < n; ++i) {
        // reflectors act trivially up to sign; |e| must match
        CHECK(std::fabs(r.e[i]) == doctest::Approx(std::fabs(a0(i, i + 1))).epsilon(1e-12));
    }
}

TEST_CASE("sytrd eigenvalues match a Jacobi oracle on 8x8") {
    DenseMatrix full = test::random_symmetric(8, 321);
    auto ref = test::jacobi_eigenvalues(full.view());
    DenseMatrix a(8, 8);
    copy_into(a.view(), full.view());
    ReflectorSet r = sytrd(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
    DenseMatrix t = test::tridiagonal_matrix(r.d, r.e);
    auto got = test::jacobi_eigenvalues(t.view());
    for (index_t i = 0; i < 8; ++i) CHECK(std::fabs(got[i] - ref[i]) <= 1e-8);
}

TEST_CASE("sytrd preserves trace and Frobenius norm") {
    for (index_t n : {5, 33, 100, 200}) {
        DenseMatrix full = test::random_symmetric(n, 600 + n);
        DenseMatrix a(n, n);
        copy_into(a.view(), full.view());
        const double tr0 = trace(full.view());
        const double fn0 = frobenius_norm(full.view());
        ReflectorSet r =
            sytrd(a.view(), small_cfg(), machine(), Strategy::D3S4, small_blocking());
        DenseMatrix t = test::tridiagonal_matrix(r.d, r.e);
        CHECK(std::fabs(trace(t.view()) - tr0) <= 1e-11 * std::max(1.0, std::fabs(tr0)));
        CHECK(std::fabs(frobenius_norm(t.view()) - fn0) <= 1e-11 * fn0);
    }
}

TEST_CASE("blocked and unblocked paths agree") {
    const index_t n = 150;
    LapackConfig unblocked{1, 1};
    LapackConfig blocked{};  // nb = 256 > n exercises the single-block path
    LapackConfig mid{32, 8};

    DenseMatrix spd = make_spd(n, 9);
    DenseMatrix a1(n, n), a2(n, n), a3(n, n);
    copy_into(a1.view(), spd.view());
    copy_into(a2.view(), spd.view());
    copy_into(a3.view(), spd.view());
    potrf(a1.view(), unblocked, machine(), Strategy::D3S4, small_blocking());
    potrf(a2.view(), blocked, machine(), Strategy::D3S4, small_blocking());
    potrf(a3.view(), mid, machine(), Strategy::D3S4, small_blocking());
    // compare upper triangles
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i <= j; ++i) {
            CHECK(a1(i, j) == doctest::Approx(a2(i, j)).epsilon(1e-11));
            CHECK(a1(i, j) == doctest::Approx(a3(i, j)).epsilon(1e-11));
        }

    DenseMatrix ge = make_uniform(n, n, 10);
    DenseMatrix g1(n, n), g2(n, n);
    copy_into(g1.view(), ge.view());
    copy_into(g2.view(), ge.view());
    GetrfResult r1 = getrf(g1.view(), unblocked, machine(), Strategy::D3S4, small_blocking());
    GetrfResult r2 = getrf(g2.view(), mid, machine(), Strategy::D3S4, small_blocking());
    CHECK(r1.pivots.ipiv == r2.pivots.ipiv);
    CHECK(rel_error(g1.view(), g2.view()) <= 1e-11);

    DenseMatrix sym = test::random_symmetric(n, 11);
    DenseMatrix s1(n, n), s2(n, n);
    copy_into(s1.view(), sym.view());
    copy_into(s2.view(), sym.view());
    ReflectorSet t1 = sytrd(s1.view(), unblocked, machine(), Strategy::D3S4, small_blocking());
    ReflectorSet t2 = sytrd(s2.view(), mid, machine(), Strategy::D3S4, small_blocking());
    for (index_t i = 0; i < n; ++i) CHECK(t1.d[i] == doctest::Approx(t2.d[i]).epsilon(1e-11));
    for (index_t i = 0; i + 1 < n; ++i)
        CHECK(std::fabs(t1.e[i]) == doctest::Approx(std::fabs(t2.e[i])).epsilon(1e-11));
}

TEST_CASE("potrf with a single worker matches every parallel strategy") {
    const index_t n = 220;
    DenseMatrix spd = make_spd(n, 55);
    DenseMatrix solo(n, n);
    copy_into(solo.view(), spd.view());
    potrf(solo.view(), small_cfg(), serial_machine(), Strategy::D3S4, small_blocking());
    for (Strategy st : {Strategy::D3S4, Strategy::D3S5}) {
        DenseMatrix par(n, n);
        copy_into(par.view(), spd.view());
        potrf(par.view(), small_cfg(), machine(), st, small_blocking());
        double num = 0.0, den = 0.0;
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i <= j; ++i) {
                const double d = par(i, j) - solo(i, j);
                num += d * d;
                den += solo(i, j) * solo(i, j);
            }
        CHECK(std::sqrt(num / den) <= 1e-12);
    }
}

TEST_CASE("flop_fraction hits the published table") {
    struct Row {
        index_t n;
        double pct;
    };
    const Row rows[] = {{100, 0.00},  {300, 5.50},   {500, 36.67},  {1000, 64.97}, {1500, 75.90},
                        {2000, 81.65}, {2500, 85.18}, {3000, 87.58}, {3500, 89.31}, {4000, 90.61},
                        {4500, 91.63}, {5000, 92.46}, {5500, 93.15}, {6000, 93.69}};
    for (const Row& r : rows) {
        const double ps = flop_fraction(FlopRoutine::potrf_syrk, r.n, 256);
        const double gg = flop_fraction(FlopRoutine::getrf_gepp, r.n, 256);
        INFO("n=", r.n, " potrf=", ps, " getrf=", gg);
        CHECK(std::fabs(ps - r.pct) <= 0.15);
        CHECK(std::fabs(gg - r.pct) <= 0.15);
        CHECK(std::fabs(ps - gg) <= 0.15);  // the two table columns are identical
    }
    CHECK(flop_fraction(FlopRoutine::potrf_syrk, 100, 256) == 0.0);
    CHECK_THROWS_AS(flop_fraction(FlopRoutine::potrf_syrk, 0, 256), std::invalid_argument);
}

TEST_CASE("lapack config validation") {
    CHECK_THROWS_AS(potrf(DenseMatrix(3, 3).view(), LapackConfig{4, 8}, machine()),
                    std::invalid_argument);
    DenseMatrix ns(2, 3);
    CHECK_THROWS_AS(potrf(ns.view(), LapackConfig{}, machine()), dimension_error);
    CHECK_THROWS_AS(sytrd(ns.view(), LapackConfig{}, machine()), dimension_error);
}
