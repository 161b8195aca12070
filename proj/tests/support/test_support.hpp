#pragma once

#include <vector>

#include "ampblas/lapack.hpp"
#include "ampblas/matrix.hpp"

namespace ampblas::test {

/// Unblocked upper Cholesky on a copy; false when a pivot is not positive.
/// Independent of the lapack module.
bool spd_cholesky_passes(ConstMatrixView a);

/// Determinant by Gaussian elimination with partial pivoting on a copy.
double determinant(ConstMatrixView a);

/// Eigenvalues of a symmetric matrix (full storage) by cyclic Jacobi sweeps,
/// sorted ascending.
std::vector<double> jacobi_eigenvalues(ConstMatrixView sym_full, double tol = 1e-13);

/// Full symmetric matrix from the upper triangle of `upper`.
DenseMatrix symmetrize_upper(ConstMatrixView upper);

/// Random symmetric matrix (full storage, bitwise symmetric).
DenseMatrix random_symmetric(index_t n, std::uint64_t seed);

/// Upper triangular with dominant diagonal; off-diagonal in [-0.5, 0.5).
DenseMatrix unit_dominant_upper(index_t n, std::uint64_t seed);

DenseMatrix tridiagonal_matrix(const std::vector<double>& d, const std::vector<double>& e);

/// || A0 - U^T U ||_F / || A0 ||_F using the upper triangle of `factored`.
double potrf_reconstruction_error(ConstMatrixView a0, ConstMatrixView factored);

/// || P A0 - L U ||_F / || A0 ||_F with P replayed from 1-based pivots.
double getrf_reconstruction_error(ConstMatrixView a0, ConstMatrixView lu,
                                  const std::vector<index_t>& ipiv);

}  // namespace ampblas::test
