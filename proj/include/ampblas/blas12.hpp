#pragma once

#include "ampblas/matrix.hpp"

namespace ampblas {

// Single-threaded level-1/2 routines backing the factorization layer.

/// y += A_sym * x, reading only the stored upper triangle of A_sym.
void symv(VecView y, ConstMatrixView a_sym, ConstVecView x);

/// y += alpha * op(A) * x.
void gemv(VecView y, ConstMatrixView a, bool trans, ConstVecView x, double alpha = 1.0);

/// A += alpha * x * y^T.
void ger(MatrixView a, ConstVecView x, ConstVecView y, double alpha);

/// Index of the first entry of maximum absolute value; -1 for empty input.
index_t iamax(ConstVecView x);

void row_swap(MatrixView a, index_t r1, index_t r2);
void scal(VecView x, double alpha);
double dot(ConstVecView x, ConstVecView y);
void axpy(double alpha, ConstVecView x, VecView y);

}  // namespace ampblas
