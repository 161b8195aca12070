#pragma once

#include "ampblas/matrix.hpp"

namespace ampblas {

// Naive single-threaded reference kernels, one per level-3 operation plus
// symv. Loop orders are fixed so results are bit-reproducible run to run;
// every parallel kernel is tested against these.

/// C += A * B, evaluated with i outer, j middle, p inner.
void oracle_gemm(MatrixView c, ConstMatrixView a, ConstMatrixView b);

/// C += A_sym * B (Left) or C += B * A_sym (Right); a_sym square, upper stored.
void oracle_symm(MatrixView c, ConstMatrixView a_sym, ConstMatrixView b, Side side);

/// B := A_tri * B (Left) or B := B * A_tri (Right); a_tri upper triangular.
void oracle_trmm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag);

/// B := A_tri^-1 * B (Left) or B := B * A_tri^-1 (Right), by per-column
/// substitution. Throws on an exactly zero diagonal.
void oracle_trsm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag);

/// Upper triangle of C += A^T A with A of shape k x n.
void oracle_syrk(MatrixView c, ConstMatrixView a);

/// Upper triangle of C += A^T B + B^T A with A, B of shape k x n.
void oracle_syr2k(MatrixView c, ConstMatrixView a, ConstMatrixView b);

/// y += A_sym * x reading only the stored upper triangle.
void oracle_symv(VecView y, ConstMatrixView a_sym, ConstVecView x);

}  // namespace ampblas
