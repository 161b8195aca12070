#include <random>

#include "ampblas/pack.hpp"
#include "ampblas/reference.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace ampblas;

namespace {
BlockingParams tiny_params() {
    BlockingParams p;
    p.kc = 16;
    p.nc = 32;
    p.mc_by_class = {8, 4};
    p.small_m_mc_by_class = {8, 4};
    return p;
}
}  // namespace

TEST_CASE("blocking parameter defaults and validation") {
    BlockingParams p;
    CHECK(p.mr == 4);
    CHECK(p.nr == 4);
    CHECK(p.kc == 352);
    CHECK(p.nc == 4096);
    CHECK(p.mc_by_class == std::vector<index_t>{152, 32});
    CHECK(p.small_m_mc_by_class == std::vector<index_t>{116, 24});
    CHECK_NOTHROW(p.validate());

    BlockingParams bad = p;
    bad.mc_by_class = {150, 32};  // not a multiple of mr
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("PanelA layout formula") {
    // 6x4 dense with mr=4: two micro-panels, second zero padded in rows 2..3
    DenseMatrix src = make_uniform(6, 4, 5);
    BlockingParams p;
    PackedBuffer buf = pack_a(src.view(), PackShape::Dense, p);
    REQUIRE(buf.panel_count() == 2);
    for (index_t l = 0; l < 4; ++l)
        for (index_t r = 0; r < 4; ++r) {
            index_t i = r;  // panel 0
            CHECK(buf.data()[0 * (4 * 4) + l * 4 + r] == src(i, l));
        }
    for (index_t l = 0; l < 4; ++l)
        for (index_t r = 0; r < 4; ++r) {
            double got = buf.data()[1 * (4 * 4) + l * 4 + r];
            if (r < 2) CHECK(got == src(4 + r, l));
            else CHECK(got == 0.0);
        }
}

TEST_CASE("PanelB layout formula") {
    DenseMatrix src = make_uniform(3, 6, 6);
    BlockingParams p;
    PackedBuffer buf = pack_b(src.view(), PackShape::Dense, p);
    REQUIRE(buf.panel_count() == 2);
    for (index_t q = 0; q < 2; ++q)
        for (index_t l = 0; l < 3; ++l)
            for (index_t c = 0; c < 4; ++c) {
                double got = buf.data()[q * (4 * 3) + l * 4 + c];
                index_t j = q * 4 + c;
                if (j < 6) CHECK(got == src(l, j));
                else CHECK(got == 0.0);
            }
}

TEST_CASE("identity packs and unpacks") {
    BlockingParams p;
    DenseMatrix eye = DenseMatrix::identity(4);
    PackedBuffer a = pack_a(eye.view(), PackShape::Dense, p);
    CHECK(a.panel_count() == 1);
    DenseMatrix ua = unpack(a);
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i) CHECK(ua(i, j) == eye(i, j));
    DenseMatrix ub = unpack(pack_b(eye.view(), PackShape::Dense, p));
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i) CHECK(ub(i, j) == eye(i, j));
}

TEST_CASE("dense pack round-trips bitwise over a size sweep") {
    BlockingParams p = tiny_params();
    std::mt19937_64 rng(99);
    for (int t = 0; t < 40; ++t) {
        index_t rows = 1 + static_cast<index_t>(rng() % 16);
        index_t cols = 1 + static_cast<index_t>(rng() % 16);
        DenseMatrix src = make_uniform(rows, cols, rng());
        DenseMatrix ra = unpack(pack_a(src.view(), PackShape::Dense, p));
        DenseMatrix rb = unpack(pack_b(src.view(), PackShape::Dense, p));
        for (index_t j = 0; j < cols; ++j)
            for (index_t i = 0; i < rows; ++i) {
                CHECK(ra(i, j) == src(i, j));
                CHECK(rb(i, j) == src(i, j));
            }
    }
}

TEST_CASE("symmetric pack of a diagonal-straddling block equals dense pack of the symmetrized matrix") {
    DenseMatrix m = make_uniform(12, 12, 17);
    DenseMatrix full = test::symmetrize_upper(m.view());
    BlockingParams p;
    PackOptions sym{PackShape::SymmetricUpper, false, false};
    PackOptions dense{PackShape::Dense, false, false};

    PackedBuffer b_sym(PanelKind::PanelA, 4, 12 * 12);
    PackedBuffer b_dense(PanelKind::PanelA, 4, 12 * 12);
    b_sym.configure(6, 7);
    b_dense.configure(6, 7);
    // block rows 3..9, cols 2..9 straddles the diagonal
    pack_a_range(b_sym, m.view(), 3, 2, 6, 7, sym, 0, b_sym.panel_count());
    pack_a_range(b_dense, full.view(), 3, 2, 6, 7, dense, 0, b_dense.panel_count());
    for (index_t i = 0; i < b_sym.size_doubles(); ++i)
        CHECK(b_sym.data()[i] == b_dense.data()[i]);
}

TEST_CASE("triangular pack zero-fills below the diagonal and can force a unit diagonal") {
    DenseMatrix m = make_uniform(8, 8, 23);
    BlockingParams p;
    PackedBuffer upper = pack_a(m.view(), PackShape::TriangularUpper, p);
    DenseMatrix u = unpack(upper);
    for (index_t j = 0; j < 8; ++j)
        for (index_t i = 0; i < 8; ++i)
            CHECK(u(i, j) == (i > j ? 0.0 : m(i, j)));
    DenseMatrix uu = unpack(pack_a(m.view(), PackShape::TriangularUpperUnit, p));
    for (index_t i = 0; i < 8; ++i) CHECK(uu(i, i) == 1.0);
}

TEST_CASE("micro-panel of Bc fits the L1 budget: kc x nr doubles is 11 KiB") {
    BlockingParams p;
    CHECK(p.kc * p.nr * static_cast<index_t>(sizeof(double)) == 11264);
}

TEST_CASE("Ac footprints for the default class strides") {
    BlockingParams p;
    // exact buffer sizes: mc * kc doubles
    PackedBuffer fast(PanelKind::PanelA, 4, 152 * 352);
    fast.configure(152, 352);
    CHECK(fast.size_bytes() == 152 * 352 * 8);  // 428032 B, fits a 2 MiB L2
    CHECK(fast.size_bytes() < 2 * 1024 * 1024);
    PackedBuffer slow(PanelKind::PanelA, 4, 80 * 352);
    slow.configure(80, 352);
    CHECK(slow.size_bytes() == 80 * 352 * 8);  // 225280 B, fits a 512 KiB L2
    CHECK(slow.size_bytes() < 512 * 1024);
    // within 21 KB of the published 408 KB / 215 KB figures
    CHECK(std::abs(fast.size_bytes() / 1000.0 - 408.0) <= 21.0);
    CHECK(std::abs(slow.size_bytes() / 1000.0 - 215.0) <= 11.0);
}

TEST_CASE("micro_kernel leaves C untouched for k=0") {
    DenseMatrix c = make_uniform(4, 4, 3);
    DenseMatrix c0(4, 4);
    copy_into(c0.view(), c.view());
    double a[4], b[4];
    micro_kernel(a, b, 0, c.view(), 4, 4);
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i) CHECK(c(i, j) == c0(i, j));
}

TEST_CASE("micro_kernel rank-1 with a unit vector hits one row") {
    double a[4] = {1.0, 0.0, 0.0, 0.0};
    double b[4] = {1.0, 2.0, 3.0, 4.0};
    DenseMatrix c(4, 4);
    micro_kernel(a, b, 1, c.view(), 4, 4);
    for (index_t j = 0; j < 4; ++j) {
        CHECK(c(0, j) == b[j]);
        for (index_t i = 1; i < 4; ++i) CHECK(c(i, j) == 0.0);
    }
}

TEST_CASE("micro_kernel agrees with the reference on packed random slabs") {
    const index_t k = 352;
    DenseMatrix a = make_uniform(4, k, 41);
    DenseMatrix b = make_uniform(k, 4, 42);
    BlockingParams p;
    PackedBuffer pa = pack_a(a.view(), PackShape::Dense, p);
    PackedBuffer pb = pack_b(b.view(), PackShape::Dense, p);
    DenseMatrix c(4, 4), ref(4, 4);
    micro_kernel(pa.panel(0), pb.panel(0), k, c.view(), 4, 4);
    oracle_gemm(ref.view(), a.view(), b.view());
    CHECK(rel_error(c.view(), ref.view()) <= 1e-13);
}

TEST_CASE("padded lanes contribute nothing") {
    // 3x2 effective tile inside a padded 4x4 micro-tile
    DenseMatrix a = make_uniform(3, 9, 51);
    DenseMatrix b = make_uniform(9, 2, 52);
    BlockingParams p;
    PackedBuffer pa = pack_a(a.view(), PackShape::Dense, p);
    PackedBuffer pb = pack_b(b.view(), PackShape::Dense, p);
    DenseMatrix c(3, 2), ref(3, 2);
    micro_kernel(pa.panel(0), pb.panel(0), 9, c.view(), 3, 2);
    oracle_gemm(ref.view(), a.view(), b.view());
    CHECK(rel_error(c.view(), ref.view()) <= 1e-14);

    // the padded lanes themselves are exactly zero in the buffers
    for (index_t l = 0; l < 9; ++l) {
        CHECK(pa.panel(0)[l * 4 + 3] == 0.0);
        CHECK(pb.panel(0)[l * 4 + 2] == 0.0);
        CHECK(pb.panel(0)[l * 4 + 3] == 0.0);
    }
}

TEST_CASE("micro-kernel corruption hook is observable") {
    double a[4] = {1.0, 1.0, 1.0, 1.0};
    double b[4] = {1.0, 1.0, 1.0, 1.0};
    DenseMatrix clean(4, 4), dirty(4, 4);
    micro_kernel(a, b, 1, clean.view(), 4, 4);
    ampblas::testing::set_micro_kernel_corruption(true);
    micro_kernel(a, b, 1, dirty.view(), 4, 4);
    ampblas::testing::set_micro_kernel_corruption(false);
    CHECK(dirty(0, 0) != clean(0, 0));
    CHECK(dirty(1, 1) == clean(1, 1));
}
