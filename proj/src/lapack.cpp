#include "ampblas/lapack.hpp"

#include <algorithm>
#include <cmath>

#include "ampblas/blas12.hpp"

namespace ampblas {

namespace {

/// Reflector for the vector (alpha, x...): x is scaled into the tail of v,
/// alpha becomes beta. The caller decides where alpha sits in storage.
double larfg(double& alpha, VecView x) {
    double sigma = 0.0;
    for (index_t i = 0; i < x.len; ++i) sigma += x[i] * x[i];
    if (sigma == 0.0) return 0.0;
    const double mu = std::sqrt(alpha * alpha + sigma);
    const double beta = alpha > 0.0 ? -mu : mu;
    const double tau = (beta - alpha) / beta;
    scal(x, 1.0 / (alpha - beta));
    alpha = beta;
    return tau;
}

/// A(0:n,0:n) upper += alpha * (x y^T + y x^T), upper triangle only.
void syr2_upper(MatrixView a, ConstVecView x, ConstVecView y, double alpha) {
    const index_t n = a.rows;
    for (index_t j = 0; j < n; ++j) {
        const double axj = alpha * x[j];
        const double ayj = alpha * y[j];
        for (index_t i = 0; i <= j; ++i) a(i, j) += x[i] * ayj + y[i] * axj;
    }
}

void potrf_unblocked(MatrixView a, index_t global_offset) {
    const index_t n = a.rows;
    for (index_t j = 0; j < n; ++j) {
        double s = a(j, j);
        for (index_t p = 0; p < j; ++p) s -= a(p, j) * a(p, j);
        if (s <= 0.0)
            throw not_positive_definite_error("potrf: non-positive pivot at index " +
                                                  std::to_string(global_offset + j),
                                              global_offset + j);
        const double ujj = std::sqrt(s);
        a(j, j) = ujj;
        for (index_t c = j + 1; c < n; ++c) {
            double v = a(j, c);
            for (index_t p = 0; p < j; ++p) v -= a(p, j) * a(p, c);
            a(j, c) = v / ujj;
        }
    }
}

void potrf_recursive(MatrixView d, index_t inner_nb, index_t global_offset,
                     const MachineModel& machine, Strategy level3, const BlockingParams& params) {
    const index_t n = d.rows;
    if (n <= inner_nb) {
        potrf_unblocked(d, global_offset);
        return;
    }
    const index_t h = n / 2;
    potrf_recursive(d.block(0, 0, h, h), inner_nb, global_offset, machine, level3, params);
    detail::trsm_ext(d.block(0, h, h, n - h), d.block(0, 0, h, h), Side::Left, Uplo::Upper,
                     true, Diag::NonUnit, machine, Strategy::S1S4, params);
    detail::syrk_update(d.block(h, h, n - h, n - h), d.block(0, h, h, n - h), true, machine,
                        level3, params);
    potrf_recursive(d.block(h, h, n - h, n - h), inner_nb, global_offset + h, machine, level3,
                    params);
}

struct PanelResult {
    std::vector<index_t> piv;  // 1-based, relative to the panel
    index_t info = 0;          // 1-based column of first zero pivot
};

PanelResult getrf_panel_unblocked(MatrixView p) {
    const index_t m = p.rows, n = p.cols;
    PanelResult r;
    r.piv.resize(n);
    for (index_t c = 0; c < n; ++c) {
        VecView sub{p.col_ptr(c) + c, m - c, 1};
        const index_t off = iamax(sub);
        const index_t piv_row = c + off;
        r.piv[c] = piv_row + 1;
        if (p(piv_row, c) != 0.0) {
            row_swap(p, c, piv_row);
            scal(VecView{p.col_ptr(c) + c + 1, m - c - 1, 1}, 1.0 / p(c, c));
        } else if (r.info == 0) {
            r.info = c + 1;
        }
        if (c + 1 < n && c + 1 < m) {
            // rank-1 update of the trailing panel; a zero pivot column makes
            // this a no-op since the scaled column is all zero
            ger(p.block(c + 1, c + 1, m - c - 1, n - c - 1),
                ConstVecView{p.col_ptr(c) + c + 1, m - c - 1, 1},
                ConstVecView{p.col_ptr(c + 1) + c, n - c - 1, p.ld}, -1.0);
        }
    }
    return r;
}

PanelResult getrf_panel(MatrixView p, index_t inner_nb, const MachineModel& machine,
                        const BlockingParams& params) {
    const index_t m = p.rows, n = p.cols;
    if (n <= inner_nb) return getrf_panel_unblocked(p);
    const index_t h = n / 2;
    PanelResult left = getrf_panel(p.block(0, 0, m, h), inner_nb, machine, params);
    laswp(p.block(0, h, m, n - h), left.piv, 0, h);
    detail::trsm_ext(p.block(0, h, h, n - h), p.block(0, 0, h, h), Side::Left, Uplo::Lower,
                     false, Diag::Unit, machine, Strategy::S1S4, params);
    if (m > h)
        detail::gemm_update(p.block(h, h, m - h, n - h), p.block(h, 0, m - h, h),
                            p.block(0, h, h, n - h), true, machine, Strategy::D3S4, params);
    PanelResult right = getrf_panel(p.block(h, h, m - h, n - h), inner_nb, machine, params);
    laswp(p.block(h, 0, m - h, h), right.piv, 0, n - h);

    PanelResult merged;
    merged.piv = std::move(left.piv);
    for (index_t v : right.piv) merged.piv.push_back(v + h);
    merged.info = left.info ? left.info : (right.info ? right.info + h : 0);
    return merged;
}

/// One blocked panel step of the upper tridiagonal reduction: reduces the
/// last nb columns of the leading nn x nn block of A and accumulates the
/// update factors in W.
void latrd_upper(MatrixView a, index_t nn, index_t nb, std::vector<double>& e,
                 std::vector<double>& tau, MatrixView w) {
    for (index_t c = nn - 1; c >= nn - nb; --c) {
        const index_t iw = c - (nn - nb);
        if (c < nn - 1) {
            // apply the reflectors already built in this panel to column c
            gemv(VecView{a.col_ptr(c), c + 1, 1}, a.block(0, c + 1, c + 1, nn - 1 - c), false,
                 ConstVecView{w.col_ptr(iw + 1) + c, nb - 1 - iw, w.ld}, -1.0);
            gemv(VecView{a.col_ptr(c), c + 1, 1}, w.block(0, iw + 1, c + 1, nb - 1 - iw), false,
                 ConstVecView{a.col_ptr(c + 1) + c, nn - 1 - c, a.ld}, -1.0);
        }
        if (c > 0) {
            double alpha = a(c - 1, c);
            const double t = larfg(alpha, VecView{a.col_ptr(c), c - 1, 1});
            e[c - 1] = alpha;
            tau[c - 1] = t;
            a(c - 1, c) = 1.0;

            // w column: tau * (A v - corrections through the panel so far)
            VecView wc{w.col_ptr(iw), c, 1};
            for (index_t i = 0; i < c; ++i) wc[i] = 0.0;
            ConstVecView v{a.col_ptr(c), c, 1};
            symv(wc, a.block(0, 0, c, c), v);
            if (c < nn - 1) {
                VecView scratch{w.col_ptr(iw) + c + 1, nn - 1 - c, 1};
                for (index_t i = 0; i < scratch.len; ++i) scratch[i] = 0.0;
                gemv(scratch, w.block(0, iw + 1, c, nb - 1 - iw), true, v, 1.0);
                gemv(wc, a.block(0, c + 1, c, nn - 1 - c), false, scratch, -1.0);
                for (index_t i = 0; i < scratch.len; ++i) scratch[i] = 0.0;
                gemv(scratch, a.block(0, c + 1, c, nn - 1 - c), true, v, 1.0);
                gemv(wc, w.block(0, iw + 1, c, nb - 1 - iw), false, scratch, -1.0);
            }
            scal(wc, t);
            const double alpha2 = -0.5 * t * dot(wc, v);
            axpy(alpha2, v, wc);
        }
    }
}

void sytd2_upper(MatrixView a, std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>& tau) {
    const index_t n = a.rows;
    std::vector<double> wbuf(n > 0 ? n : 1);
    for (index_t c = n - 1; c >= 1; --c) {
        double alpha = a(c - 1, c);
        const double t = larfg(alpha, VecView{a.col_ptr(c), c - 1, 1});
        e[c - 1] = alpha;
        if (t != 0.0) {
            a(c - 1, c) = 1.0;
            VecView wv{wbuf.data(), c, 1};
            for (index_t i = 0; i < c; ++i) wv[i] = 0.0;
            ConstVecView v{a.col_ptr(c), c, 1};
            symv(wv, a.block(0, 0, c, c), v);
            scal(wv, t);
            const double alpha2 = -0.5 * t * dot(wv, v);
            axpy(alpha2, v, wv);
            syr2_upper(a.block(0, 0, c, c), v, wv, -1.0);
            a(c - 1, c) = e[c - 1];
        }
        tau[c - 1] = t;
    }
    for (index_t j = 0; j < n; ++j) d[j] = a(j, j);
}

}  // namespace

void LapackConfig::validate() const {
    if (nb < 1 || inner_nb < 1) throw std::invalid_argument("block sizes must be >= 1");
    if (inner_nb > nb) throw std::invalid_argument("inner_nb must not exceed nb");
}

Householder householder(ConstVecView x) {
    if (x.len < 1) throw dimension_error("householder: empty vector");
    Householder h;
    h.v.resize(x.len);
    for (index_t i = 0; i < x.len; ++i) h.v[i] = x[i];
    double alpha = h.v[0];
    h.tau = larfg(alpha, VecView{h.v.data() + 1, x.len - 1, 1});
    h.beta = alpha;
    h.v[0] = 1.0;
    return h;
}

void potrf(MatrixView a, const LapackConfig& cfg, const MachineModel& machine, Strategy level3,
           const BlockingParams& params) {
    cfg.validate();
    if (a.rows != a.cols) throw dimension_error("potrf: A not square");
    const index_t n = a.rows;
    for (index_t j = 0; j < n; j += cfg.nb) {
        const index_t jb = std::min(cfg.nb, n - j);
        potrf_recursive(a.block(j, j, jb, jb), cfg.inner_nb, j, machine, level3, params);
        const index_t t = n - j - jb;
        if (t > 0) {
            detail::trsm_ext(a.block(j, j + jb, jb, t), a.block(j, j, jb, jb), Side::Left,
                             Uplo::Upper, true, Diag::NonUnit, machine, Strategy::S1S4, params);
            detail::syrk_update(a.block(j + jb, j + jb, t, t), a.block(j, j + jb, jb, t), true,
                                machine, level3, params);
        }
    }
}

GetrfResult getrf(MatrixView a, const LapackConfig& cfg, const MachineModel& machine,
                  Strategy level3, const BlockingParams& params) {
    cfg.validate();
    const index_t m = a.rows, n = a.cols;
    const index_t kmin = std::min(m, n);
    GetrfResult res;
    res.pivots.ipiv.resize(kmin);
    for (index_t j = 0; j < kmin; j += cfg.nb) {
        const index_t jb = std::min(cfg.nb, kmin - j);
        PanelResult pr =
            getrf_panel(a.block(j, j, m - j, jb), cfg.inner_nb, machine, params);
        if (pr.info && !res.info) res.info = pr.info + j;
        for (index_t i = 0; i < jb; ++i) res.pivots.ipiv[j + i] = pr.piv[i] + j;
        if (j > 0) laswp(a.block(j, 0, m - j, j), pr.piv, 0, jb);
        if (j + jb < n) {
            laswp(a.block(j, j + jb, m - j, n - j - jb), pr.piv, 0, jb);
            detail::trsm_ext(a.block(j, j + jb, jb, n - j - jb), a.block(j, j, jb, jb),
                             Side::Left, Uplo::Lower, false, Diag::Unit, machine, Strategy::S1S4,
                             params);
            if (j + jb < m)
                detail::gemm_update(a.block(j + jb, j + jb, m - j - jb, n - j - jb),
                                    a.block(j + jb, j, m - j - jb, jb),
                                    a.block(j, j + jb, jb, n - j - jb), true, machine, level3,
                                    params);
        }
    }
    return res;
}

void laswp(MatrixView a, const std::vector<index_t>& ipiv, index_t piv_begin, index_t piv_end) {
    if (piv_end > static_cast<index_t>(ipiv.size()) || piv_begin < 0)
        throw std::out_of_range("laswp: pivot range out of bounds");
    for (index_t i = piv_begin; i < piv_end; ++i) {
        const index_t tgt = ipiv[i] - 1;
        if (tgt < 0 || tgt >= a.rows || i >= a.rows)
            throw std::out_of_range("laswp: pivot index " + std::to_string(ipiv[i]) +
                                    " outside row bounds");
        if (tgt != i) row_swap(a, i, tgt);
    }
}

ReflectorSet sytrd(MatrixView a, const LapackConfig& cfg, const MachineModel& machine,
                   Strategy level3, const BlockingParams& params) {
    cfg.validate();
    if (a.rows != a.cols) throw dimension_error("sytrd: A not square");
    const index_t n = a.rows;
    if (n < 1) throw dimension_error("sytrd: n must be >= 1");

    ReflectorSet r;
    r.d.resize(n);
    r.e.resize(n - 1);
    r.tau.resize(n - 1);

    const index_t nb = cfg.nb;
    const index_t kk = n - ((n - 1) / nb) * nb;  // size of the unblocked base
    DenseMatrix w(n, std::min(nb, n));

    for (index_t i1 = n; i1 > kk; i1 -= nb) {
        latrd_upper(a, i1, nb, r.e, r.tau, w.view());
        detail::syr2k_update_nt(a.block(0, 0, i1 - nb, i1 - nb),
                                a.block(0, i1 - nb, i1 - nb, nb), w.block(0, 0, i1 - nb, nb),
                                true, machine, level3, params);
        for (index_t c = i1 - nb; c < i1; ++c) {
            if (c > 0) a(c - 1, c) = r.e[c - 1];
            r.d[c] = a(c, c);
        }
    }
    sytd2_upper(a.block(0, 0, kk, kk), r.d, r.e, r.tau);
    return r;
}

double flop_fraction(FlopRoutine routine, index_t n, index_t b) {
    if (n < 1 || b < 1) throw std::invalid_argument("flop_fraction: n and b must be >= 1");
    double num = 0.0;
    for (index_t j = 0; j < n; j += b) {
        const double bj = static_cast<double>(std::min(b, n - j));
        const double t = static_cast<double>(n - j) - bj;
        num += routine == FlopRoutine::potrf_syrk ? bj * t * (t + 1.0) : 2.0 * bj * t * t;
    }
    const double nd = static_cast<double>(n);
    const double den = routine == FlopRoutine::potrf_syrk
                           ? nd * (nd + 1.0) * (2.0 * nd + 1.0) / 6.0
                           : nd * (4.0 * nd + 1.0) * (nd - 1.0) / 6.0;
    return 100.0 * num / den;
}

}  // namespace ampblas
