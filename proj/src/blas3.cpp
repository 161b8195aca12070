#include "ampblas/blas3.hpp"

#include <algorithm>
#include <initializer_list>

#include "ampblas/parallel.hpp"
#include "ampblas/partition.hpp"

namespace ampblas {

namespace {

struct Operand {
    ConstMatrixView view;
    PackOptions opts;
    index_t rows() const { return opts.transpose ? view.cols : view.rows; }
    index_t cols() const { return opts.transpose ? view.rows : view.cols; }
};

struct NestProblem {
    MatrixView c;
    Operand a;
    Operand b;
    bool upper_output = false;  // syrk/syr2k: never write strictly below the diagonal
    bool a_upper_tri = false;   // skip loop-3 blocks where the packed A block is all zero
    bool b_upper_tri = false;   // skip loop-2 blocks where the packed B block is all zero
};

void check_strategy(Strategy s, std::initializer_list<Strategy> allowed, const char* kernel) {
    for (Strategy a : allowed)
        if (a == s) return;
    std::string msg = std::string(kernel) + ": strategy " + to_string(s) +
                      " not admissible; admissible:";
    for (Strategy a : allowed) msg += " " + to_string(a);
    throw std::invalid_argument(msg);
}

void set_zero(MatrixView a) {
    for (index_t j = 0; j < a.cols; ++j)
        for (index_t i = 0; i < a.rows; ++i) a(i, j) = 0.0;
}

struct ClassSlot {
    alignas(64) Chunk chunk;
};

/// The five-loop nest. Loop 1 (jc over n) and loop 2 (pc over k) are iterated
/// by all workers in lockstep; Bc is packed cooperatively by the whole team.
/// Loop 3 (ic over m) is either dispensed dynamically per class with the
/// class stride (D3S4/D3S5) or walked sequentially with loop 4 split across
/// all cores (ObS4). Each class packs its own Ac.
void run_nest(const NestProblem& pb, const MachineModel& machine, Strategy strategy,
              const BlockingParams& params0) {
    const index_t m = pb.c.rows, n = pb.c.cols, k = pb.a.cols();
    if (pb.a.rows() != m || pb.b.rows() != k || pb.b.cols() != n)
        throw dimension_error("level-3 kernel dimension mismatch");
    if (m == 0 || n == 0 || k == 0) return;

    BlockingParams params = select_params({m, n, k}, params0);
    params.validate();
    const index_t mr = params.mr, nr = params.nr, kc = params.kc, nc = params.nc;
    const int n_classes = static_cast<int>(machine.classes.size());
    if (static_cast<int>(params.mc_by_class.size()) < n_classes)
        throw std::invalid_argument("blocking params lack mc strides for this machine");

    const index_t kc_cap = std::min(kc, k);
    PackedBuffer bc(PanelKind::PanelB, nr, ((std::min(nc, n) + nr - 1) / nr) * nr * kc_cap);

    const bool oblivious = strategy == Strategy::ObS4;
    const index_t mc0 = params.mc_by_class[0];
    std::vector<PackedBuffer> ac;
    if (oblivious) {
        ac.emplace_back(PanelKind::PanelA, mr, mc0 * kc_cap);
    } else {
        for (int c = 0; c < n_classes; ++c)
            ac.emplace_back(PanelKind::PanelA, mr, params.mc_by_class[c] * kc_cap);
    }

    ChunkDispenser dispenser(m);
    std::vector<ClassSlot> slots(n_classes);

    auto chunk_skipped = [&](const Chunk& ch, index_t pc, index_t kcw, index_t jc, index_t ncw) {
        if (pb.a_upper_tri && pc + kcw <= ch.start) return true;
        if (pb.upper_output && ch.start > jc + ncw - 1) return true;
        return false;
    };

    auto process_chunk = [&](Worker& w, PackedBuffer& acbuf, const Chunk& ch, index_t pc,
                             index_t kcw, index_t jc, index_t ncw, bool team_wide) {
        const int parts = team_wide ? w.team_size : w.class_size;
        const int my_part = team_wide ? w.id : w.rank_in_class;
        const index_t n_jr = (ncw + nr - 1) / nr;
        const index_t n_ir = (ch.width + mr - 1) / mr;
        Range jr_range{0, n_jr}, ir_range{0, n_ir};
        if (strategy == Strategy::D3S5)
            ir_range = share_range(split_even(n_ir, parts), my_part);
        else
            jr_range = share_range(split_even(n_jr, parts), my_part);

        for (index_t jr = jr_range.begin; jr < jr_range.end; ++jr) {
            const index_t j0 = jc + jr * nr;
            const index_t n_eff = std::min(nr, jc + ncw - j0);
            for (index_t ir = ir_range.begin; ir < ir_range.end; ++ir) {
                const index_t i0 = ch.start + ir * mr;
                const index_t m_eff = std::min(mr, ch.start + ch.width - i0);
                if (pb.a_upper_tri && pc + kcw <= i0) continue;
                if (pb.upper_output) {
                    if (i0 > j0 + n_eff - 1) continue;
                    if (i0 + m_eff - 1 > j0) {
                        // straddles the diagonal: compute densely, merge upper part
                        double tile[16];
                        micro_kernel_tile(acbuf.panel(ir), bc.panel(jr), kcw, tile);
                        MatrixView cb = pb.c.block(i0, j0, m_eff, n_eff);
                        for (index_t jj = 0; jj < n_eff; ++jj)
                            for (index_t ii = 0; ii < m_eff; ++ii)
                                if (i0 + ii <= j0 + jj) cb(ii, jj) += tile[jj * 4 + ii];
                        w.note_write({i0, i0 + m_eff, j0, j0 + n_eff});
                        continue;
                    }
                }
                micro_kernel(acbuf.panel(ir), bc.panel(jr), kcw,
                             pb.c.block(i0, j0, m_eff, n_eff), m_eff, n_eff);
                w.note_write({i0, i0 + m_eff, j0, j0 + n_eff});
            }
        }
    };

    auto dynamic_loop3 = [&](Worker& w, index_t pc, index_t kcw, index_t jc, index_t ncw) {
        const int cls = w.class_id;
        const index_t stride = params.mc_by_class[cls];
        PackedBuffer& acbuf = ac[cls];
        for (;;) {
            if (w.rank_in_class == 0) {
                Chunk ch = dispenser.claim(cls, stride);
                if (ch.width > 0 && !chunk_skipped(ch, pc, kcw, jc, ncw))
                    acbuf.configure(ch.width, kcw);
                slots[cls].chunk = ch;
            }
            w.class_sync();
            const Chunk ch = slots[cls].chunk;
            if (ch.width == 0) break;
            if (chunk_skipped(ch, pc, kcw, jc, ncw)) {
                // keep the slot stable until the whole class has read it
                w.class_sync();
                continue;
            }
            {
                const index_t n_panels = (ch.width + mr - 1) / mr;
                Range r = share_range(split_even(n_panels, w.class_size), w.rank_in_class);
                pack_a_range(acbuf, pb.a.view, ch.start, pc, ch.width, kcw, pb.a.opts, r.begin,
                             r.end);
            }
            w.class_sync();
            process_chunk(w, acbuf, ch, pc, kcw, jc, ncw, false);
            w.class_sync();  // Ac is reused by the next chunk
        }
    };

    auto oblivious_loop3 = [&](Worker& w, index_t pc, index_t kcw, index_t jc, index_t ncw) {
        PackedBuffer& acbuf = ac[0];
        for (index_t ic = 0; ic < m; ic += mc0) {
            const Chunk ch{0, ic, std::min(mc0, m - ic)};
            if (chunk_skipped(ch, pc, kcw, jc, ncw)) continue;
            if (w.id == 0) acbuf.configure(ch.width, kcw);
            w.team_sync();
            const index_t n_panels = (ch.width + mr - 1) / mr;
            Range r = share_range(split_even(n_panels, w.team_size), w.id);
            pack_a_range(acbuf, pb.a.view, ch.start, pc, ch.width, kcw, pb.a.opts, r.begin, r.end);
            w.team_sync();
            process_chunk(w, acbuf, ch, pc, kcw, jc, ncw, true);
            w.team_sync();
        }
    };

    run_parallel(machine, [&](Worker& w) {
        for (index_t jc = 0; jc < n; jc += nc) {
            const index_t ncw = std::min(nc, n - jc);
            const index_t n_bc_panels = (ncw + nr - 1) / nr;
            for (index_t pc = 0; pc < k; pc += kc) {
                const index_t kcw = std::min(kc, k - pc);
                if (pb.b_upper_tri && pc > jc + ncw - 1) continue;

                if (w.id == 0) {
                    bc.configure(kcw, ncw);
                    dispenser.reset(m);
                }
                w.team_sync();
                Range r = share_range(split_even(n_bc_panels, w.team_size), w.id);
                pack_b_range(bc, pb.b.view, pc, jc, kcw, ncw, pb.b.opts, r.begin, r.end);
                w.team_sync();  // Bc complete

                if (oblivious)
                    oblivious_loop3(w, pc, kcw, jc, ncw);
                else
                    dynamic_loop3(w, pc, kcw, jc, ncw);

                w.team_sync();  // all chunks finished before Bc is reused
            }
        }
    });
}

// Serial helpers for the per-core substitution solves.

void serial_gemm_acc(MatrixView c, ConstMatrixView a, bool trans_a, ConstMatrixView b,
                     double sign) {
    const index_t m = c.rows, n = c.cols, k = trans_a ? a.rows : a.cols;
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (index_t p = 0; p < k; ++p)
                s += (trans_a ? a(p, i) : a(i, p)) * b(p, j);
            c(i, j) += sign * s;
        }
}

void solve_left_unblocked(ConstMatrixView a, MatrixView x, Uplo uplo, bool trans, Diag diag) {
    const index_t n = a.rows;
    const bool unit = diag == Diag::Unit;
    const bool backward = (uplo == Uplo::Upper) != trans;
    for (index_t j = 0; j < x.cols; ++j) {
        if (backward) {
            for (index_t i = n - 1; i >= 0; --i) {
                double s = x(i, j);
                for (index_t p = i + 1; p < n; ++p)
                    s -= (trans ? a(p, i) : a(i, p)) * x(p, j);
                x(i, j) = unit ? s : s / a(i, i);
            }
        } else {
            for (index_t i = 0; i < n; ++i) {
                double s = x(i, j);
                for (index_t p = 0; p < i; ++p)
                    s -= (trans ? a(p, i) : a(i, p)) * x(p, j);
                x(i, j) = unit ? s : s / a(i, i);
            }
        }
    }
}

/// X := op(A)^-1 X by recursive halving; base of size <= mr.
void solve_left(ConstMatrixView a, MatrixView x, Uplo uplo, bool trans, Diag diag) {
    const index_t n = a.rows;
    if (n <= 4) {
        solve_left_unblocked(a, x, uplo, trans, diag);
        return;
    }
    const index_t h = n / 2;
    ConstMatrixView a11 = a.block(0, 0, h, h);
    ConstMatrixView a22 = a.block(h, h, n - h, n - h);
    MatrixView x1 = x.block(0, 0, h, x.cols);
    MatrixView x2 = x.block(h, 0, n - h, x.cols);
    if (uplo == Uplo::Upper && !trans) {
        solve_left(a22, x2, uplo, trans, diag);
        serial_gemm_acc(x1, a.block(0, h, h, n - h), false, x2, -1.0);
        solve_left(a11, x1, uplo, trans, diag);
    } else if (uplo == Uplo::Upper && trans) {
        solve_left(a11, x1, uplo, trans, diag);
        serial_gemm_acc(x2, a.block(0, h, h, n - h), true, x1, -1.0);
        solve_left(a22, x2, uplo, trans, diag);
    } else if (uplo == Uplo::Lower && !trans) {
        solve_left(a11, x1, uplo, trans, diag);
        serial_gemm_acc(x2, a.block(h, 0, n - h, h), false, x1, -1.0);
        solve_left(a22, x2, uplo, trans, diag);
    } else {
        solve_left(a22, x2, uplo, trans, diag);
        serial_gemm_acc(x1, a.block(h, 0, n - h, h), true, x2, -1.0);
        solve_left(a11, x1, uplo, trans, diag);
    }
}

void solve_right_unblocked(ConstMatrixView a, MatrixView x, Diag diag) {
    // X := X A^-1, A upper; forward over columns.
    const index_t n = a.rows;
    const bool unit = diag == Diag::Unit;
    for (index_t j = 0; j < n; ++j) {
        for (index_t p = 0; p < j; ++p) {
            const double apj = a(p, j);
            if (apj == 0.0) continue;
            for (index_t i = 0; i < x.rows; ++i) x(i, j) -= x(i, p) * apj;
        }
        if (!unit) {
            const double ajj = a(j, j);
            for (index_t i = 0; i < x.rows; ++i) x(i, j) /= ajj;
        }
    }
}

void solve_right(ConstMatrixView a, MatrixView x, Diag diag) {
    const index_t n = a.rows;
    if (n <= 4) {
        solve_right_unblocked(a, x, diag);
        return;
    }
    const index_t h = n / 2;
    MatrixView x1 = x.block(0, 0, x.rows, h);
    MatrixView x2 = x.block(0, h, x.rows, n - h);
    solve_right(a.block(0, 0, h, h), x1, diag);
    serial_gemm_acc(x2, x1, false, a.block(0, h, h, n - h), -1.0);
    solve_right(a.block(h, h, n - h, n - h), x2, diag);
}

}  // namespace

BlockingParams select_params(const GemmProblem& problem, const BlockingParams& base) {
    BlockingParams out = base;
    if (problem.m <= base.small_m_threshold) out.mc_by_class = base.small_m_mc_by_class;
    return out;
}

namespace detail {

void gemm_update(MatrixView c, ConstMatrixView a, ConstMatrixView b, bool negate,
                 const MachineModel& machine, Strategy strategy, const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5, Strategy::ObS4}, "gemm");
    NestProblem pb;
    pb.c = c;
    pb.a = {a, {PackShape::Dense, false, negate}};
    pb.b = {b, {PackShape::Dense, false, false}};
    run_nest(pb, machine, strategy, params);
}

void syrk_update(MatrixView c, ConstMatrixView a, bool negate, const MachineModel& machine,
                 Strategy strategy, const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5}, "syrk");
    if (c.rows != c.cols) throw dimension_error("syrk: C not square");
    NestProblem pb;
    pb.c = c;
    pb.a = {a, {PackShape::Dense, true, negate}};
    pb.b = {a, {PackShape::Dense, false, false}};
    pb.upper_output = true;
    run_nest(pb, machine, strategy, params);
}

void syr2k_update_nt(MatrixView c, ConstMatrixView v, ConstMatrixView w, bool negate,
                     const MachineModel& machine, Strategy strategy,
                     const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5}, "syr2k");
    if (c.rows != c.cols) throw dimension_error("syr2k: C not square");
    if (v.rows != w.rows || v.cols != w.cols || v.rows != c.rows)
        throw dimension_error("syr2k dimension mismatch");
    NestProblem pb;
    pb.c = c;
    pb.upper_output = true;
    pb.a = {v, {PackShape::Dense, false, negate}};
    pb.b = {w, {PackShape::Dense, true, false}};
    run_nest(pb, machine, strategy, params);
    pb.a = {w, {PackShape::Dense, false, negate}};
    pb.b = {v, {PackShape::Dense, true, false}};
    run_nest(pb, machine, strategy, params);
}

void trsm_ext(MatrixView b, ConstMatrixView a_tri, Side side, Uplo uplo, bool trans_a, Diag diag,
              const MachineModel& machine, Strategy strategy, const BlockingParams& params) {
    (void)params;
    if (a_tri.rows != a_tri.cols) throw dimension_error("trsm: A not square");
    const index_t m = b.rows, n = b.cols;
    if (a_tri.rows != (side == Side::Left ? m : n))
        throw dimension_error("trsm dimension mismatch");
    if (side == Side::Left)
        check_strategy(strategy, {Strategy::S1S4}, "trsm (left)");
    else {
        check_strategy(strategy, {Strategy::S3, Strategy::S3S5}, "trsm (right)");
        if (uplo != Uplo::Upper || trans_a)
            throw std::invalid_argument("trsm (right): only the upper/no-transpose form exists");
    }
    if (diag == Diag::NonUnit)
        for (index_t i = 0; i < a_tri.rows; ++i)
            if (a_tri(i, i) == 0.0)
                throw singular_matrix_error(
                    "trsm: exactly zero diagonal entry at index " + std::to_string(i), i);
    if (m == 0 || n == 0) return;

    std::vector<double> class_weights;
    for (const auto& c : machine.classes)
        class_weights.push_back(c.core_count * c.relative_speed);

    run_parallel(machine, [&](Worker& w) {
        if (side == Side::Left) {
            // S1S4: columns split between classes with the speed ratio, then
            // evenly within the class; each core solves its block of
            // right-hand sides independently.
            auto cls_shares = split_static(n, class_weights);
            Range cr = share_range(cls_shares, w.class_id);
            Range my = share_range(split_even(cr.size(), w.class_size), w.rank_in_class);
            const index_t c0 = cr.begin + my.begin;
            const index_t cn = my.size();
            if (cn > 0) {
                solve_left(a_tri, b.block(0, c0, m, cn), uplo, trans_a, diag);
                w.note_write({0, m, c0, c0 + cn});
            }
        } else {
            Range mine;
            if (strategy == Strategy::S3) {
                std::vector<double> core_weights;
                for (const auto& c : machine.classes)
                    core_weights.insert(core_weights.end(), c.core_count, c.relative_speed);
                mine = share_range(split_static(m, core_weights), w.id);
            } else {  // S3S5: class split, then rows within the class share
                auto cls_shares = split_static(m, class_weights);
                Range cr = share_range(cls_shares, w.class_id);
                Range inner = share_range(split_even(cr.size(), w.class_size), w.rank_in_class);
                mine = {cr.begin + inner.begin, cr.begin + inner.end};
            }
            if (!mine.empty()) {
                solve_right(a_tri, b.block(mine.begin, 0, mine.size(), n), diag);
                w.note_write({mine.begin, mine.end, 0, n});
            }
        }
    });
}

}  // namespace detail

void gemm(MatrixView c, ConstMatrixView a, ConstMatrixView b, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params) {
    detail::gemm_update(c, a, b, false, machine, strategy, params);
}

void symm(MatrixView c, ConstMatrixView a_sym, ConstMatrixView b, Side side,
          const MachineModel& machine, Strategy strategy, const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5}, "symm");
    if (a_sym.rows != a_sym.cols) throw dimension_error("symm: A not square");
    NestProblem pb;
    pb.c = c;
    if (side == Side::Left) {
        pb.a = {a_sym, {PackShape::SymmetricUpper, false, false}};
        pb.b = {b, {PackShape::Dense, false, false}};
    } else {
        pb.a = {b, {PackShape::Dense, false, false}};
        pb.b = {a_sym, {PackShape::SymmetricUpper, false, false}};
    }
    run_nest(pb, machine, strategy, params);
}

void trmm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5}, "trmm");
    if (a_tri.rows != a_tri.cols) throw dimension_error("trmm: A not square");
    if (a_tri.rows != (side == Side::Left ? b.rows : b.cols))
        throw dimension_error("trmm dimension mismatch");
    if (b.rows == 0 || b.cols == 0) return;
    const PackShape shape =
        diag == Diag::Unit ? PackShape::TriangularUpperUnit : PackShape::TriangularUpper;

    if (side == Side::Left) {
        // In-place safety: stage each column panel of B, zero it, then
        // accumulate A * stage back into it.
        for (index_t jc = 0; jc < b.cols; jc += params.nc) {
            const index_t ncw = std::min(params.nc, b.cols - jc);
            MatrixView panel = b.block(0, jc, b.rows, ncw);
            DenseMatrix stage(b.rows, ncw);
            copy_into(stage.view(), panel);
            set_zero(panel);
            NestProblem pb;
            pb.c = panel;
            pb.a = {a_tri, {shape, false, false}};
            pb.b = {stage.view(), {PackShape::Dense, false, false}};
            pb.a_upper_tri = true;
            run_nest(pb, machine, strategy, params);
        }
    } else {
        // Output columns need input columns to their left, so the whole of B
        // is staged up front.
        DenseMatrix stage(b.rows, b.cols);
        copy_into(stage.view(), b);
        set_zero(b);
        NestProblem pb;
        pb.c = b;
        pb.a = {stage.view(), {PackShape::Dense, false, false}};
        pb.b = {a_tri, {shape, false, false}};
        pb.b_upper_tri = true;
        run_nest(pb, machine, strategy, params);
    }
}

void trsm(MatrixView b, ConstMatrixView a_tri, Side side, Diag diag, const MachineModel& machine,
          Strategy strategy, const BlockingParams& params) {
    detail::trsm_ext(b, a_tri, side, Uplo::Upper, false, diag, machine, strategy, params);
}

void syrk(MatrixView c, ConstMatrixView a, const MachineModel& machine, Strategy strategy,
          const BlockingParams& params) {
    detail::syrk_update(c, a, false, machine, strategy, params);
}

void syr2k(MatrixView c, ConstMatrixView a, ConstMatrixView b, const MachineModel& machine,
           Strategy strategy, const BlockingParams& params) {
    check_strategy(strategy, {Strategy::D3S4, Strategy::D3S5}, "syr2k");
    if (c.rows != c.cols) throw dimension_error("syr2k: C not square");
    if (a.rows != b.rows || a.cols != b.cols || a.cols != c.rows)
        throw dimension_error("syr2k dimension mismatch");
    NestProblem pb;
    pb.c = c;
    pb.upper_output = true;
    pb.a = {a, {PackShape::Dense, true, false}};
    pb.b = {b, {PackShape::Dense, false, false}};
    run_nest(pb, machine, strategy, params);
    pb.a = {b, {PackShape::Dense, true, false}};
    pb.b = {a, {PackShape::Dense, false, false}};
    run_nest(pb, machine, strategy, params);
}

}  // namespace ampblas
