#include "ampblas/pack.hpp"

#include <atomic>
#include <stdexcept>

namespace ampblas {

namespace {
constexpr index_t kMr = 4;
constexpr index_t kNr = 4;

std::atomic<bool> g_corrupt_micro{false};
}  // namespace

namespace testing {
void set_micro_kernel_corruption(bool enabled) { g_corrupt_micro.store(enabled); }
bool micro_kernel_corruption() { return g_corrupt_micro.load(); }
}  // namespace testing

void BlockingParams::validate() const {
    if (mr != kMr || nr != kNr)
        throw std::invalid_argument("only the mr=nr=4 micro-kernel is provided");
    if (kc < 1 || nc < 1) throw std::invalid_argument("kc and nc must be >= 1");
    if (mc_by_class.empty() || small_m_mc_by_class.size() != mc_by_class.size())
        throw std::invalid_argument("mc stride lists empty or inconsistent");
    auto check_mc = [&](index_t mc) {
        if (mc < mr || mc % mr != 0)
            throw std::invalid_argument("mc strides must be multiples of mr and >= mr");
    };
    for (index_t mc : mc_by_class) check_mc(mc);
    for (index_t mc : small_m_mc_by_class) check_mc(mc);
    if (small_m_threshold < 0) throw std::invalid_argument("negative small-m threshold");
}

BlockingParams BlockingParams::from_machine(const MachineModel& m) {
    BlockingParams p;
    p.mc_by_class.clear();
    p.small_m_mc_by_class.clear();
    for (const auto& c : m.classes) {
        p.mc_by_class.push_back(c.mc_stride);
        p.small_m_mc_by_class.push_back(c.small_m_mc_stride);
    }
    p.validate();
    return p;
}

PackedBuffer::PackedBuffer(PanelKind kind, index_t panel_width, index_t capacity_doubles)
    : kind_(kind), panel_width_(panel_width) {
    data_.resize(static_cast<std::size_t>(capacity_doubles));
}

void PackedBuffer::configure(index_t rows, index_t cols) {
    rows_ = rows;
    cols_ = cols;
    std::size_t need = static_cast<std::size_t>(panel_count() * panel_width_ * depth());
    if (data_.size() < need) data_.resize(need);
}

index_t PackedBuffer::panel_count() const {
    index_t logical = kind_ == PanelKind::PanelA ? rows_ : cols_;
    return (logical + panel_width_ - 1) / panel_width_;
}

namespace {

// (gi, gj) are coordinates of the logical operand: the operand itself, or its
// transpose when opts.transpose is set (dense data only).
inline double fetch(ConstMatrixView op, const PackOptions& opts, index_t gi, index_t gj) {
    double v;
    switch (opts.shape) {
        case PackShape::Dense:
            v = opts.transpose ? op(gj, gi) : op(gi, gj);
            break;
        case PackShape::SymmetricUpper:
            v = gi <= gj ? op(gi, gj) : op(gj, gi);
            break;
        case PackShape::TriangularUpper:
            v = gi > gj ? 0.0 : op(gi, gj);
            break;
        case PackShape::TriangularUpperUnit:
            if (gi > gj) v = 0.0;
            else if (gi == gj) v = 1.0;
            else v = op(gi, gj);
            break;
        default: v = 0.0;
    }
    return opts.negate ? -v : v;
}

void check_pack(const PackedBuffer& dst, PanelKind kind, const PackOptions& opts) {
    if (dst.kind() != kind) throw std::invalid_argument("pack: wrong buffer kind");
    if (opts.transpose && opts.shape != PackShape::Dense)
        throw std::invalid_argument("pack: transpose only supported for dense operands");
}

}  // namespace

void pack_a_range(PackedBuffer& dst, ConstMatrixView operand, index_t r0, index_t c0,
                  index_t rows, index_t cols, const PackOptions& opts, index_t panel_begin,
                  index_t panel_end) {
    check_pack(dst, PanelKind::PanelA, opts);
    const index_t mr = dst.panel_width();
    for (index_t p = panel_begin; p < panel_end; ++p) {
        double* out = dst.panel(p);
        for (index_t l = 0; l < cols; ++l) {
            for (index_t r = 0; r < mr; ++r) {
                index_t i = p * mr + r;
                out[l * mr + r] = i < rows ? fetch(operand, opts, r0 + i, c0 + l) : 0.0;
            }
        }
    }
}

void pack_b_range(PackedBuffer& dst, ConstMatrixView operand, index_t r0, index_t c0,
                  index_t rows, index_t cols, const PackOptions& opts, index_t panel_begin,
                  index_t panel_end) {
    check_pack(dst, PanelKind::PanelB, opts);
    const index_t nr = dst.panel_width();
    for (index_t q = panel_begin; q < panel_end; ++q) {
        double* out = dst.panel(q);
        for (index_t l = 0; l < rows; ++l) {
            for (index_t c = 0; c < nr; ++c) {
                index_t j = q * nr + c;
                out[l * nr + c] = j < cols ? fetch(operand, opts, r0 + l, c0 + j) : 0.0;
            }
        }
    }
}

PackedBuffer pack_a(ConstMatrixView src, PackShape shape, const BlockingParams& params) {
    PackedBuffer buf(PanelKind::PanelA, params.mr, 0);
    buf.configure(src.rows, src.cols);
    PackOptions opts{shape, false, false};
    pack_a_range(buf, src, 0, 0, src.rows, src.cols, opts, 0, buf.panel_count());
    return buf;
}

PackedBuffer pack_b(ConstMatrixView src, PackShape shape, const BlockingParams& params) {
    PackedBuffer buf(PanelKind::PanelB, params.nr, 0);
    buf.configure(src.rows, src.cols);
    PackOptions opts{shape, false, false};
    pack_b_range(buf, src, 0, 0, src.rows, src.cols, opts, 0, buf.panel_count());
    return buf;
}

DenseMatrix unpack(const PackedBuffer& buf) {
    DenseMatrix m(buf.rows(), buf.cols());
    if (buf.kind() == PanelKind::PanelA) {
        const index_t mr = buf.panel_width();
        for (index_t p = 0; p < buf.panel_count(); ++p) {
            const double* in = buf.panel(p);
            for (index_t l = 0; l < buf.cols(); ++l)
                for (index_t r = 0; r < mr && p * mr + r < buf.rows(); ++r)
                    m(p * mr + r, l) = in[l * mr + r];
        }
    } else {
        const index_t nr = buf.panel_width();
        for (index_t q = 0; q < buf.panel_count(); ++q) {
            const double* in = buf.panel(q);
            for (index_t l = 0; l < buf.rows(); ++l)
                for (index_t c = 0; c < nr && q * nr + c < buf.cols(); ++c)
                    m(l, q * nr + c) = in[l * nr + c];
        }
    }
    return m;
}

void micro_kernel_tile(const double* a_panel, const double* b_panel, index_t k, double* tile) {
    double acc[kMr * kNr] = {0.0};
    for (index_t l = 0; l < k; ++l) {
        const double* a = a_panel + l * kMr;
        const double* b = b_panel + l * kNr;
        for (index_t c = 0; c < kNr; ++c)
            for (index_t r = 0; r < kMr; ++r) acc[c * kMr + r] += a[r] * b[c];
    }
    if (g_corrupt_micro.load(std::memory_order_relaxed) && k > 0) acc[0] += 1e-3;
    for (index_t i = 0; i < kMr * kNr; ++i) tile[i] = acc[i];
}

void micro_kernel(const double* a_panel, const double* b_panel, index_t k, MatrixView c,
                  index_t m_eff, index_t n_eff) {
    double tile[kMr * kNr];
    micro_kernel_tile(a_panel, b_panel, k, tile);
    for (index_t j = 0; j < n_eff; ++j)
        for (index_t i = 0; i < m_eff; ++i) c(i, j) += tile[j * kMr + i];
}

}  // namespace ampblas
