#include "ampblas/blas12.hpp"

#include <cmath>

namespace ampblas {

void symv(VecView y, ConstMatrixView a_sym, ConstVecView x) {
    const index_t n = a_sym.rows;
    if (a_sym.cols != n || x.len != n || y.len != n)
        throw dimension_error("symv dimension mismatch");
    for (index_t j = 0; j < n; ++j) {
        const double xj = x[j];
        double s = 0.0;
        for (index_t i = 0; i < j; ++i) {
            y[i] += a_sym(i, j) * xj;  // upper entry
            s += a_sym(i, j) * x[i];   // mirrored lower entry
        }
        y[j] += a_sym(j, j) * xj + s;
    }
}

void gemv(VecView y, ConstMatrixView a, bool trans, ConstVecView x, double alpha) {
    const index_t m = trans ? a.cols : a.rows;
    const index_t k = trans ? a.rows : a.cols;
    if (x.len != k || y.len != m) throw dimension_error("gemv dimension mismatch");
    for (index_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (index_t p = 0; p < k; ++p) s += (trans ? a(p, i) : a(i, p)) * x[p];
        y[i] += alpha * s;
    }
}

void ger(MatrixView a, ConstVecView x, ConstVecView y, double alpha) {
    if (x.len != a.rows || y.len != a.cols) throw dimension_error("ger dimension mismatch");
    for (index_t j = 0; j < a.cols; ++j) {
        const double ayj = alpha * y[j];
        for (index_t i = 0; i < a.rows; ++i) a(i, j) += x[i] * ayj;
    }
}

index_t iamax(ConstVecView x) {
    index_t best = -1;
    double best_abs = -1.0;
    for (index_t i = 0; i < x.len; ++i) {
        double v = std::fabs(x[i]);
        if (v > best_abs) {
            best_abs = v;
            best = i;
        }
    }
    return best;
}

void row_swap(MatrixView a, index_t r1, index_t r2) {
    if (r1 == r2) return;
    for (index_t j = 0; j < a.cols; ++j) std::swap(a(r1, j), a(r2, j));
}

void scal(VecView x, double alpha) {
    for (index_t i = 0; i < x.len; ++i) x[i] *= alpha;
}

double dot(ConstVecView x, ConstVecView y) {
    if (x.len != y.len) throw dimension_error("dot dimension mismatch");
    double s = 0.0;
    for (index_t i = 0; i < x.len; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double alpha, ConstVecView x, VecView y) {
    if (x.len != y.len) throw dimension_error("axpy dimension mismatch");
    for (index_t i = 0; i < x.len; ++i) y[i] += alpha * x[i];
}

}  // namespace ampblas
