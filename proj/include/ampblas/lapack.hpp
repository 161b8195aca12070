#pragma once

#include <vector>

#include "ampblas/blas3.hpp"
#include "ampblas/machine.hpp"
#include "ampblas/matrix.hpp"

namespace ampblas {

/// Algorithmic block sizes (the ilaenv equivalent): nb for the outer blocked
/// sweep, inner_nb for the recursive panel/diagonal factorizations.
struct LapackConfig {
    index_t nb = 256;
    index_t inner_nb = 32;
    void validate() const;
};

class not_positive_definite_error : public std::runtime_error {
public:
    not_positive_definite_error(const std::string& what, index_t index)
        : std::runtime_error(what), index(index) {}
    index_t index;  // zero-based global diagonal position
};

/// Row interchanges from partial pivoting; ipiv[i] is the 1-based row that
/// row i was swapped with (never smaller than i+1).
struct PivotVector {
    std::vector<index_t> ipiv;
};

struct GetrfResult {
    PivotVector pivots;
    /// 0 when nonsingular; otherwise the 1-based index of the first exactly
    /// zero pivot (factorization still completes, LAPACK style).
    index_t info = 0;
};

/// Householder vectors stored compactly plus the tridiagonal result.
struct ReflectorSet {
    std::vector<double> tau;  // n-1 factors
    std::vector<double> d;    // diagonal of T, length n
    std::vector<double> e;    // superdiagonal of T, length n-1
};

struct Householder {
    std::vector<double> v;  // v[0] == 1
    double tau = 0.0;
    double beta = 0.0;
};

/// Reflector mapping x to beta*e1: (I - tau v v^T) x = beta e1, with the sign
/// of beta opposite to x[0] and tau = 0 when x is already a multiple of e1.
Householder householder(ConstVecView x);

/// Cholesky A = U^T U on the upper triangle, right-looking: recursive blocked
/// factorization of each nb diagonal block, a transposed panel solve of the
/// block row, and a syrk update of the trailing upper triangle. Throws
/// not_positive_definite_error at the first non-positive pivot.
void potrf(MatrixView a, const LapackConfig& cfg, const MachineModel& machine,
           Strategy level3 = Strategy::D3S4,
           const BlockingParams& params = BlockingParams{});

/// LU with partial row pivoting. A is overwritten with L (unit diagonal
/// implicit) and U; panels are factored recursively down to an unblocked base
/// of inner_nb columns.
GetrfResult getrf(MatrixView a, const LapackConfig& cfg, const MachineModel& machine,
                  Strategy level3 = Strategy::D3S4,
                  const BlockingParams& params = BlockingParams{});

/// Applies interchanges i <-> ipiv[i]-1 for i in [piv_begin, piv_end), in
/// increasing i, over all columns of `a`. Row indices are relative to `a`.
void laswp(MatrixView a, const std::vector<index_t>& ipiv, index_t piv_begin, index_t piv_end);

/// Reduction of a symmetric matrix (upper stored) to tridiagonal form by
/// orthogonal similarity. Reflectors remain in the strictly upper part of A;
/// d/e carry the tridiagonal matrix. Panels build V and W through symv and
/// gemv (single-threaded), the trailing update runs through syr2k.
ReflectorSet sytrd(MatrixView a, const LapackConfig& cfg, const MachineModel& machine,
                   Strategy level3 = Strategy::D3S4,
                   const BlockingParams& params = BlockingParams{});

enum class FlopRoutine { potrf_syrk, getrf_gepp };

/// Percentage of the factorization flops spent in the trailing update
/// (syrk for potrf, gepp for getrf) at block size b. Step cost conventions:
/// syrk b*t*(t+1), gepp 2*b*t^2 with t the trailing dimension; totals
/// n^3/3 + n^2/2 + n/6 and 2n^3/3 - n^2/2 - n/6.
double flop_fraction(FlopRoutine routine, index_t n, index_t b);

}  // namespace ampblas
