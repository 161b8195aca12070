#include "ampblas/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace ampblas {

namespace {

void check_block(index_t i, index_t j, index_t r, index_t c, index_t rows, index_t cols) {
    if (i < 0 || j < 0 || r < 0 || c < 0 || i + r > rows || j + c > cols)
        throw dimension_error("matrix block out of bounds");
}

}  // namespace

MatrixView MatrixView::block(index_t i, index_t j, index_t r, index_t c) const {
    check_block(i, j, r, c, rows, cols);
    return {base, ld, row_off + i, col_off + j, r, c};
}

MatrixView::operator ConstMatrixView() const {
    return {base, ld, row_off, col_off, rows, cols};
}

ConstMatrixView ConstMatrixView::block(index_t i, index_t j, index_t r, index_t c) const {
    check_block(i, j, r, c, rows, cols);
    return {base, ld, row_off + i, col_off + j, r, c};
}

DenseMatrix::DenseMatrix(index_t rows, index_t cols, index_t ld)
    : rows_(rows), cols_(cols), ld_(ld) {
    if (rows < 0 || cols < 0) throw dimension_error("negative matrix dimension");
    if (ld < rows) throw dimension_error("leading stride smaller than row count");
    data_.assign(static_cast<std::size_t>(ld) * static_cast<std::size_t>(cols), 0.0);
}

DenseMatrix DenseMatrix::identity(index_t n) {
    DenseMatrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

MatrixView DenseMatrix::view() {
    return {data_.data(), ld_, 0, 0, rows_, cols_};
}

ConstMatrixView DenseMatrix::view() const {
    return {data_.data(), ld_, 0, 0, rows_, cols_};
}

MatrixView DenseMatrix::block(index_t i, index_t j, index_t r, index_t c) {
    return view().block(i, j, r, c);
}

ConstMatrixView DenseMatrix::block(index_t i, index_t j, index_t r, index_t c) const {
    return view().block(i, j, r, c);
}

VecView col_vec(const MatrixView& a, index_t j) { return {a.col_ptr(j), a.rows, 1}; }
VecView row_vec(const MatrixView& a, index_t i) { return {a.col_ptr(0) + i, a.cols, a.ld}; }
ConstVecView col_vec(const ConstMatrixView& a, index_t j) { return {a.col_ptr(j), a.rows, 1}; }
ConstVecView row_vec(const ConstMatrixView& a, index_t i) { return {a.col_ptr(0) + i, a.cols, a.ld}; }

DenseMatrix make_spd(index_t n, std::uint64_t seed) {
    if (n < 1) throw dimension_error("make_spd requires n >= 1");
    std::mt19937_64 rng(seed);
    DenseMatrix g(n, n);
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i) g(i, j) = detail::uniform01(rng());

    DenseMatrix m(n, n);
    // Fill the upper triangle, then mirror so M is symmetric bitwise.
    for (index_t j = 0; j < n; ++j) {
        for (index_t i = 0; i <= j; ++i) {
            double s = 0.0;
            for (index_t p = 0; p < n; ++p) s += g(p, i) * g(p, j);
            if (i == j) s += static_cast<double>(n);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return m;
}

DenseMatrix make_uniform(index_t rows, index_t cols, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    DenseMatrix m(rows, cols);
    for (index_t j = 0; j < cols; ++j)
        for (index_t i = 0; i < rows; ++i)
            m(i, j) = lo + (hi - lo) * detail::uniform01(rng());
    return m;
}

double frobenius_norm(ConstMatrixView a) {
    double s = 0.0;
    for (index_t j = 0; j < a.cols; ++j)
        for (index_t i = 0; i < a.rows; ++i) {
            double v = a(i, j);
            s += v * v;
        }
    return std::sqrt(s);
}

double trace(ConstMatrixView a) {
    if (a.rows != a.cols) throw dimension_error("trace of non-square matrix");
    double s = 0.0;
    for (index_t i = 0; i < a.rows; ++i) s += a(i, i);
    return s;
}

DenseMatrix transposed_copy(ConstMatrixView a) {
    DenseMatrix t(a.cols, a.rows);
    for (index_t j = 0; j < a.cols; ++j)
        for (index_t i = 0; i < a.rows; ++i) t(j, i) = a(i, j);
    return t;
}

void copy_into(MatrixView dst, ConstMatrixView src) {
    if (dst.rows != src.rows || dst.cols != src.cols)
        throw dimension_error("copy_into shape mismatch");
    for (index_t j = 0; j < src.cols; ++j)
        for (index_t i = 0; i < src.rows; ++i) dst(i, j) = src(i, j);
}

double rel_error(ConstMatrixView a, ConstMatrixView b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw dimension_error("rel_error shape mismatch");
    double num = 0.0, den = 0.0;
    for (index_t j = 0; j < a.cols; ++j)
        for (index_t i = 0; i < a.rows; ++i) {
            double d = a(i, j) - b(i, j);
            double v = b(i, j);
            num += d * d;
            den += v * v;
        }
    den = std::sqrt(den);
    if (den < 1e-300) den = 1e-300;
    return std::sqrt(num) / den;
}

void write_matrix(std::ostream& os, ConstMatrixView a) {
    os << a.rows << ' ' << a.cols << '\n';
    char buf[64];
    for (index_t j = 0; j < a.cols; ++j) {
        for (index_t i = 0; i < a.rows; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
            if (i) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

DenseMatrix read_matrix(std::istream& is) {
    index_t rows = -1, cols = -1;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("matrix file: bad header");
    DenseMatrix m(rows, cols);
    for (index_t j = 0; j < cols; ++j)
        for (index_t i = 0; i < rows; ++i)
            if (!(is >> m(i, j))) throw std::runtime_error("matrix file: truncated data");
    return m;
}

void write_matrix_file(const std::string& path, ConstMatrixView a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_matrix(os, a);
}

DenseMatrix read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_matrix(is);
}

}  // namespace ampblas
