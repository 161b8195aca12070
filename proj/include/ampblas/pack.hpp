#pragma once

#include <vector>

#include "ampblas/machine.hpp"
#include "ampblas/matrix.hpp"

namespace ampblas {

/// Register and cache blocking parameters of the five-loop nest. mc is per
/// core class; the small-m pair trades cache efficiency for a finer loop-3
/// grain when the m dimension offers too few chunks to balance.
struct BlockingParams {
    index_t mr = 4;
    index_t nr = 4;
    index_t kc = 352;
    index_t nc = 4096;
    std::vector<index_t> mc_by_class = {152, 32};
    std::vector<index_t> small_m_mc_by_class = {116, 24};
    index_t small_m_threshold = 512;

    void validate() const;

    /// Strides taken from the machine description instead of the defaults.
    static BlockingParams from_machine(const MachineModel& m);
};

enum class PackShape { Dense, SymmetricUpper, TriangularUpper, TriangularUpperUnit };

enum class PanelKind { PanelA, PanelB };

/// Contiguous staging buffer in micro-panel order.
///
/// PanelA: element (p*mr + r, l) at offset p*(mr*depth) + l*mr + r.
/// PanelB: element (l, q*nr + c) at offset q*(nr*depth) + l*nr + c.
/// Partial edge panels are zero padded to the full panel width.
class PackedBuffer {
public:
    PackedBuffer() = default;
    PackedBuffer(PanelKind kind, index_t panel_width, index_t capacity_doubles);

    void configure(index_t rows, index_t cols);

    PanelKind kind() const { return kind_; }
    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t panel_width() const { return panel_width_; }
    index_t panel_count() const;
    /// Depth of one micro-panel: cols for PanelA, rows for PanelB.
    index_t depth() const { return kind_ == PanelKind::PanelA ? cols_ : rows_; }

    double* panel(index_t p) { return data_.data() + p * panel_width_ * depth(); }
    const double* panel(index_t p) const { return data_.data() + p * panel_width_ * depth(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    index_t size_doubles() const { return panel_count() * panel_width_ * depth(); }
    index_t size_bytes() const { return size_doubles() * static_cast<index_t>(sizeof(double)); }

private:
    PanelKind kind_ = PanelKind::PanelA;
    index_t panel_width_ = 4;
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> data_;
};

struct PackOptions {
    PackShape shape = PackShape::Dense;
    bool transpose = false;  // read the operand transposed; Dense only
    bool negate = false;     // stage -value (folds a -1 scale into the kernel)
};

/// Packs the block [r0, r0+rows) x [c0, c0+cols) of `operand` into `dst`,
/// micro-panels [panel_begin, panel_end). Structured shapes resolve entries
/// against the operand's own diagonal, so a block may read its symmetric
/// mirror outside the block. Ranged so that several workers can fill one
/// buffer cooperatively.
void pack_a_range(PackedBuffer& dst, ConstMatrixView operand, index_t r0, index_t c0,
                  index_t rows, index_t cols, const PackOptions& opts, index_t panel_begin,
                  index_t panel_end);
void pack_b_range(PackedBuffer& dst, ConstMatrixView operand, index_t r0, index_t c0,
                  index_t rows, index_t cols, const PackOptions& opts, index_t panel_begin,
                  index_t panel_end);

/// Whole-operand convenience forms.
PackedBuffer pack_a(ConstMatrixView src, PackShape shape, const BlockingParams& params);
PackedBuffer pack_b(ConstMatrixView src, PackShape shape, const BlockingParams& params);

DenseMatrix unpack(const PackedBuffer& buf);

/// mr x nr register-blocked update: C(0:m_eff, 0:n_eff) += sum_l a(:,l) b(l,:).
/// a_panel is an mr x k slab in PanelA order, b_panel a k x nr slab in PanelB
/// order; padded lanes never touch C.
void micro_kernel(const double* a_panel, const double* b_panel, index_t k, MatrixView c,
                  index_t m_eff, index_t n_eff);

/// Same update computed densely into a zeroed mr x nr scratch tile; used for
/// tiles straddling the diagonal of a triangular output.
void micro_kernel_tile(const double* a_panel, const double* b_panel, index_t k,
                       double* tile /* mr*nr, column-major */);

namespace testing {
/// Fault-injection hook: when enabled the micro-kernel perturbs its first
/// accumulator, which every oracle comparison must catch.
void set_micro_kernel_corruption(bool enabled);
bool micro_kernel_corruption();
}  // namespace testing

}  // namespace ampblas
