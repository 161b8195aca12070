#pragma once

#include "ampblas/machine.hpp"
#include "ampblas/matrix.hpp"
#include "ampblas/pack.hpp"
#include "ampblas/strategy.hpp"

namespace ampblas {

struct GemmProblem {
    index_t m = 0;
    index_t n = 0;
    index_t k = 0;
};

class singular_matrix_error : public std::runtime_error {
public:
    singular_matrix_error(const std::string& what, index_t index)
        : std::runtime_error(what), index(index) {}
    index_t index;
};

/// Switches the loop-3 strides to the small-m pair when m is at or below the
/// threshold; few chunks per class otherwise starve the slow class.
BlockingParams select_params(const GemmProblem& problem, const BlockingParams& base);

/// C += A * B. Strategies: D3S4, D3S5, ObS4.
void gemm(MatrixView c, ConstMatrixView a, ConstMatrixView b, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params);

/// C += A_sym * B (Left) or B * A_sym (Right); A square, upper stored.
/// The symmetric operand is expanded during packing so the gemm loop nest is
/// reused unchanged. Strategies: D3S4, D3S5.
void symm(MatrixView c, ConstMatrixView a_sym, ConstMatrixView b, Side side,
          const MachineModel& machine, Strategy strategy, const BlockingParams& params);

/// B := A_tri * B (Left) or B * A_tri (Right), in place; A upper triangular.
/// Strategies: D3S4, D3S5.
void trmm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params);

/// B := A_tri^-1 * B (Left, strategy S1S4) or B * A_tri^-1 (Right, S3 or
/// S3S5); A upper triangular. Each worker solves an independent column (row)
/// block by blocked substitution with an unblocked base of size <= mr.
/// Throws singular_matrix_error on an exactly zero diagonal.
void trsm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params);

/// Upper triangle of C += A^T A, A of shape k x n. Blocks strictly below the
/// diagonal are never written; straddling micro-tiles go through a scratch
/// tile. Strategies: D3S4, D3S5.
void syrk(MatrixView c, ConstMatrixView a, const MachineModel& machine, Strategy strategy,
          const BlockingParams& params);

/// Upper triangle of C += A^T B + B^T A, A and B of shape k x n.
void syr2k(MatrixView c, ConstMatrixView a, ConstMatrixView b, const MachineModel& machine,
           Strategy strategy, const BlockingParams& params);

namespace detail {

// Orientation- and sign-extended entry points for the factorization layer.
// The public kernels keep the fixed forms above; the factorizations
// additionally need subtraction updates and the solve orientations LAPACK
// uses for upper-storage algorithms.

/// C += (negate ? -1 : +1) * A * B.
void gemm_update(MatrixView c, ConstMatrixView a, ConstMatrixView b, bool negate,
                 const MachineModel& machine, Strategy strategy, const BlockingParams& params);

/// Upper triangle of C += sign * A^T A (A k x n).
void syrk_update(MatrixView c, ConstMatrixView a, bool negate, const MachineModel& machine,
                 Strategy strategy, const BlockingParams& params);

/// Upper triangle of C += sign * (V W^T + W V^T) with V, W of shape n x k.
void syr2k_update_nt(MatrixView c, ConstMatrixView v, ConstMatrixView w, bool negate,
                     const MachineModel& machine, Strategy strategy,
                     const BlockingParams& params);

/// B := op(A)^-1 B (Left) or B op(A)^-1 (Right) with explicit uplo and
/// optional transposition of A. Right side supports Upper/NoTrans only.
void trsm_ext(MatrixView b, ConstMatrixView a_tri, Side side, Uplo uplo, bool trans_a, Diag diag,
              const MachineModel& machine, Strategy strategy, const BlockingParams& params);

}  // namespace detail

}  // namespace ampblas
