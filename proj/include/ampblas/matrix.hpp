#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ampblas {

using index_t = std::int64_t;

enum class Uplo { Upper, Lower };
enum class Diag { NonUnit, Unit };
enum class Side { Left, Right };

struct TriangleSpec {
    Uplo uplo = Uplo::Upper;
    Diag diag = Diag::NonUnit;
    Side side = Side::Left;
};

class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ConstMatrixView;

/// Mutable window into a column-major matrix. Carries the offsets of the
/// window inside its origin so structured packing can mirror across the
/// operand diagonal.
struct MatrixView {
    double* base = nullptr;  // origin element (0,0)
    index_t ld = 0;
    index_t row_off = 0;
    index_t col_off = 0;
    index_t rows = 0;
    index_t cols = 0;

    double& operator()(index_t i, index_t j) const {
        return base[(col_off + j) * ld + row_off + i];
    }
    double* col_ptr(index_t j) const { return base + (col_off + j) * ld + row_off; }

    MatrixView block(index_t i, index_t j, index_t r, index_t c) const;

    operator ConstMatrixView() const;
};

struct ConstMatrixView {
    const double* base = nullptr;
    index_t ld = 0;
    index_t row_off = 0;
    index_t col_off = 0;
    index_t rows = 0;
    index_t cols = 0;

    double operator()(index_t i, index_t j) const {
        return base[(col_off + j) * ld + row_off + i];
    }
    const double* col_ptr(index_t j) const { return base + (col_off + j) * ld + row_off; }

    ConstMatrixView block(index_t i, index_t j, index_t r, index_t c) const;
};

/// Strided vector views for the level-1/2 routines (columns have stride 1,
/// rows have stride ld).
struct VecView {
    double* ptr = nullptr;
    index_t len = 0;
    index_t stride = 1;
    double& operator[](index_t i) const { return ptr[i * stride]; }
};

struct ConstVecView {
    const double* ptr = nullptr;
    index_t len = 0;
    index_t stride = 1;
    ConstVecView() = default;
    ConstVecView(const double* p, index_t n, index_t s) : ptr(p), len(n), stride(s) {}
    ConstVecView(const VecView& v) : ptr(v.ptr), len(v.len), stride(v.stride) {}
    double operator[](index_t i) const { return ptr[i * stride]; }
};

/// Dense real matrix, column-major with explicit leading stride (>= rows).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols) : DenseMatrix(rows, cols, rows) {}
    DenseMatrix(index_t rows, index_t cols, index_t ld);

    static DenseMatrix identity(index_t n);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t ld() const { return ld_; }

    double& operator()(index_t i, index_t j) { return data_[j * ld_ + i]; }
    double operator()(index_t i, index_t j) const { return data_[j * ld_ + i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    MatrixView view();
    ConstMatrixView view() const;
    MatrixView block(index_t i, index_t j, index_t r, index_t c);
    ConstMatrixView block(index_t i, index_t j, index_t r, index_t c) const;

    VecView col(index_t j) { return {&data_[j * ld_], rows_, 1}; }
    ConstVecView col(index_t j) const { return {&data_[j * ld_], rows_, 1}; }

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    index_t ld_ = 0;
    std::vector<double> data_;
};

// Column/row slices of a view.
VecView col_vec(const MatrixView& a, index_t j);
VecView row_vec(const MatrixView& a, index_t i);
ConstVecView col_vec(const ConstMatrixView& a, index_t j);
ConstVecView row_vec(const ConstMatrixView& a, index_t i);

/// Symmetric positive definite test matrix: G^T G + n I with G uniform in
/// [0,1) from `seed`. Deterministic per (n, seed); bitwise symmetric.
DenseMatrix make_spd(index_t n, std::uint64_t seed);

/// Uniform random matrix in [lo, hi), deterministic per seed across platforms.
DenseMatrix make_uniform(index_t rows, index_t cols, std::uint64_t seed,
                         double lo = 0.0, double hi = 1.0);

double frobenius_norm(ConstMatrixView a);
double trace(ConstMatrixView a);

DenseMatrix transposed_copy(ConstMatrixView a);
void copy_into(MatrixView dst, ConstMatrixView src);

/// Relative Frobenius distance ||a - b||_F / max(||b||_F, 1e-300).
double rel_error(ConstMatrixView a, ConstMatrixView b);

// Text fixture format: first line "rows cols", then one column per line with
// 17 significant digits.
void write_matrix(std::ostream& os, ConstMatrixView a);
DenseMatrix read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, ConstMatrixView a);
DenseMatrix read_matrix_file(const std::string& path);

namespace detail {
/// 53-bit uniform draw in [0,1); avoids std::uniform_real_distribution so
/// streams are identical across standard libraries.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}
}  // namespace detail

}  // namespace ampblas
