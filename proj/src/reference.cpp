#include "ampblas/reference.hpp"

namespace ampblas {

namespace {

double tri_at(ConstMatrixView a, index_t i, index_t j, Diag diag) {
    if (i == j) return diag == Diag::Unit ? 1.0 : a(i, i);
    if (i > j) return 0.0;
    return a(i, j);
}

double sym_at(ConstMatrixView a, index_t i, index_t j) {
    return i <= j ? a(i, j) : a(j, i);
}

}  // namespace

void oracle_gemm(MatrixView c, ConstMatrixView a, ConstMatrixView b) {
    if (a.rows != c.rows || b.cols != c.cols || a.cols != b.rows)
        throw dimension_error("oracle_gemm dimension mismatch");
    const index_t m = c.rows, n = c.cols, k = a.cols;
    for (index_t i = 0; i < m; ++i)
        for (index_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (index_t p = 0; p < k; ++p) s += a(i, p) * b(p, j);
            c(i, j) += s;
        }
}

void oracle_symm(MatrixView c, ConstMatrixView a_sym, ConstMatrixView b, Side side) {
    if (a_sym.rows != a_sym.cols) throw dimension_error("oracle_symm: A not square");
    const index_t m = c.rows, n = c.cols;
    if (side == Side::Left) {
        if (a_sym.rows != m || b.rows != m || b.cols != n)
            throw dimension_error("oracle_symm dimension mismatch");
        for (index_t i = 0; i < m; ++i)
            for (index_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (index_t p = 0; p < m; ++p) s += sym_at(a_sym, i, p) * b(p, j);
                c(i, j) += s;
            }
    } else {
        if (a_sym.rows != n || b.rows != m || b.cols != n)
            throw dimension_error("oracle_symm dimension mismatch");
        for (index_t i = 0; i < m; ++i)
            for (index_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (index_t p = 0; p < n; ++p) s += b(i, p) * sym_at(a_sym, p, j);
                c(i, j) += s;
            }
    }
}

void oracle_trmm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag) {
    if (a_tri.rows != a_tri.cols) throw dimension_error("oracle_trmm: A not square");
    const index_t m = b.rows, n = b.cols;
    DenseMatrix out(m, n);
    if (side == Side::Left) {
        if (a_tri.rows != m) throw dimension_error("oracle_trmm dimension mismatch");
        for (index_t i = 0; i < m; ++i)
            for (index_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (index_t p = i; p < m; ++p) s += tri_at(a_tri, i, p, diag) * b(p, j);
                out(i, j) = s;
            }
    } else {
        if (a_tri.rows != n) throw dimension_error("oracle_trmm dimension mismatch");
        for (index_t i = 0; i < m; ++i)
            for (index_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (index_t p = 0; p <= j; ++p) s += b(i, p) * tri_at(a_tri, p, j, diag);
                out(i, j) = s;
            }
    }
    copy_into(b, out.view());
}

void oracle_trsm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag) {
    if (a_tri.rows != a_tri.cols) throw dimension_error("oracle_trsm: A not square");
    const index_t m = b.rows, n = b.cols;
    if (side == Side::Left) {
        // Back substitution, one right-hand-side column at a time.
        if (a_tri.rows != m) throw dimension_error("oracle_trsm dimension mismatch");
        for (index_t j = 0; j < n; ++j)
            for (index_t i = m - 1; i >= 0; --i) {
                double s = b(i, j);
                for (index_t p = i + 1; p < m; ++p) s -= a_tri(i, p) * b(p, j);
                if (diag == Diag::NonUnit) {
                    if (a_tri(i, i) == 0.0)
                        throw std::runtime_error("oracle_trsm: zero diagonal");
                    s /= a_tri(i, i);
                }
                b(i, j) = s;
            }
    } else {
        // Forward substitution over columns of B.
        if (a_tri.rows != n) throw dimension_error("oracle_trsm dimension mismatch");
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < m; ++i) {
                double s = b(i, j);
                for (index_t p = 0; p < j; ++p) s -= b(i, p) * a_tri(p, j);
                if (diag == Diag::NonUnit) {
                    if (a_tri(j, j) == 0.0)
                        throw std::runtime_error("oracle_trsm: zero diagonal");
                    s /= a_tri(j, j);
                }
                b(i, j) = s;
            }
    }
}

void oracle_syrk(MatrixView c, ConstMatrixView a) {
    if (c.rows != c.cols || a.cols != c.rows)
        throw dimension_error("oracle_syrk dimension mismatch");
    const index_t n = c.rows, k = a.rows;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i; j < n; ++j) {
            double s = 0.0;
            for (index_t p = 0; p < k; ++p) s += a(p, i) * a(p, j);
            c(i, j) += s;
        }
}

void oracle_syr2k(MatrixView c, ConstMatrixView a, ConstMatrixView b) {
    if (c.rows != c.cols || a.cols != c.rows || b.cols != c.rows || a.rows != b.rows)
        throw dimension_error("oracle_syr2k dimension mismatch");
    const index_t n = c.rows, k = a.rows;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i; j < n; ++j) {
            double s = 0.0;
            for (index_t p = 0; p < k; ++p) s += a(p, i) * b(p, j) + b(p, i) * a(p, j);
            c(i, j) += s;
        }
}

void oracle_symv(VecView y, ConstMatrixView a_sym, ConstVecView x) {
    if (a_sym.rows != a_sym.cols || x.len != a_sym.cols || y.len != a_sym.rows)
        throw dimension_error("oracle_symv dimension mismatch");
    const index_t n = a_sym.rows;
    for (index_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (index_t p = 0; p < n; ++p) s += sym_at(a_sym, i, p) * x[p];
        y[i] += s;
    }
}

}  // namespace ampblas
