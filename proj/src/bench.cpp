#include "ampblas/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ampblas/reference.hpp"

namespace ampblas {

std::string to_string(KernelId k) {
    switch (k) {
        case KernelId::gemm: return "gemm";
        case KernelId::symm: return "symm";
        case KernelId::trmm: return "trmm";
        case KernelId::trsm: return "trsm";
        case KernelId::syrk: return "syrk";
        case KernelId::syr2k: return "syr2k";
    }
    return "?";
}

std::string to_string(ShapeCase s) {
    switch (s) {
        case ShapeCase::SQUARE: return "square";
        case ShapeCase::GEPP: return "gepp";
        case ShapeCase::GEMP: return "gemp";
        case ShapeCase::GEPM: return "gepm";
        case ShapeCase::SYMP: return "symp";
        case ShapeCase::SYPM: return "sypm";
        case ShapeCase::TRMP: return "trmp";
        case ShapeCase::TRPM: return "trpm";
        case ShapeCase::TRSP: return "trsp";
        case ShapeCase::TRPS: return "trps";
        case ShapeCase::SYRK_N: return "syrk_n";
        case ShapeCase::SYR2K_N: return "syr2k_n";
    }
    return "?";
}

KernelId parse_kernel(const std::string& name) {
    for (KernelId k : {KernelId::gemm, KernelId::symm, KernelId::trmm, KernelId::trsm,
                       KernelId::syrk, KernelId::syr2k})
        if (name == to_string(k)) return k;
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

ShapeCase parse_shape(const std::string& name) {
    for (ShapeCase s : all_shapes())
        if (name == to_string(s)) return s;
    throw std::invalid_argument("unknown shape case '" + name + "'");
}

const std::vector<ShapeCase>& all_shapes() {
    static const std::vector<ShapeCase> shapes = {
        ShapeCase::SQUARE, ShapeCase::GEPP, ShapeCase::GEMP,   ShapeCase::GEPM,
        ShapeCase::SYMP,   ShapeCase::SYPM, ShapeCase::TRMP,   ShapeCase::TRPM,
        ShapeCase::TRSP,   ShapeCase::TRPS, ShapeCase::SYRK_N, ShapeCase::SYR2K_N};
    return shapes;
}

KernelId kernel_of_shape(ShapeCase s) {
    switch (s) {
        case ShapeCase::SQUARE:
        case ShapeCase::GEPP:
        case ShapeCase::GEMP:
        case ShapeCase::GEPM: return KernelId::gemm;
        case ShapeCase::SYMP:
        case ShapeCase::SYPM: return KernelId::symm;
        case ShapeCase::TRMP:
        case ShapeCase::TRPM: return KernelId::trmm;
        case ShapeCase::TRSP:
        case ShapeCase::TRPS: return KernelId::trsm;
        case ShapeCase::SYRK_N: return KernelId::syrk;
        case ShapeCase::SYR2K_N: return KernelId::syr2k;
    }
    throw std::invalid_argument("bad shape");
}

std::vector<ShapeCase> shapes_of_kernel(KernelId k) {
    std::vector<ShapeCase> out;
    for (ShapeCase s : all_shapes())
        if (kernel_of_shape(s) == k) out.push_back(s);
    return out;
}

std::vector<Strategy> admissible_strategies(ShapeCase s) {
    switch (kernel_of_shape(s)) {
        case KernelId::gemm: return {Strategy::D3S4, Strategy::D3S5, Strategy::ObS4};
        case KernelId::trsm:
            return s == ShapeCase::TRSP ? std::vector<Strategy>{Strategy::S1S4}
                                        : std::vector<Strategy>{Strategy::S3, Strategy::S3S5};
        default: return {Strategy::D3S4, Strategy::D3S5};
    }
}

bool is_admissible(ShapeCase s, Strategy st) {
    auto adm = admissible_strategies(s);
    return std::find(adm.begin(), adm.end(), st) != adm.end();
}

bool is_admissible_simulated(ShapeCase s, Strategy st) {
    if (kernel_of_shape(s) == KernelId::trsm) return is_admissible(s, st);
    return is_admissible(s, st) || st == Strategy::ObS4;
}

ProblemDims dims_for(ShapeCase s, index_t size, index_t panel) {
    switch (s) {
        case ShapeCase::SQUARE: return {size, size, size};
        case ShapeCase::GEPP: return {size, size, panel};
        case ShapeCase::GEMP: return {size, panel, size};
        case ShapeCase::GEPM: return {panel, size, size};
        case ShapeCase::SYMP: return {size, panel, size};    // A_sym m x m on the left
        case ShapeCase::SYPM: return {panel, size, size};    // A_sym n x n on the right
        case ShapeCase::TRMP: return {size, panel, size};
        case ShapeCase::TRPM: return {panel, size, size};
        case ShapeCase::TRSP: return {size, panel, size};
        case ShapeCase::TRPS: return {panel, size, size};
        case ShapeCase::SYRK_N: return {size, size, panel};  // C n x n, A k x n
        case ShapeCase::SYR2K_N: return {size, size, panel};
    }
    throw std::invalid_argument("bad shape");
}

double flops_for(ShapeCase s, const ProblemDims& d) {
    const double m = static_cast<double>(d.m), n = static_cast<double>(d.n),
                 k = static_cast<double>(d.k);
    switch (kernel_of_shape(s)) {
        case KernelId::gemm: return 2.0 * m * n * k;
        case KernelId::symm:
            return s == ShapeCase::SYMP ? 2.0 * m * m * n : 2.0 * m * n * n;
        case KernelId::trmm: return s == ShapeCase::TRMP ? m * m * n : m * n * n;
        case KernelId::trsm: return s == ShapeCase::TRSP ? n * m * m : m * n * n;
        case KernelId::syrk: return n * (n + 1.0) * k;
        case KernelId::syr2k: return 2.0 * n * (n + 1.0) * k;
    }
    return 0.0;
}

SimWork sim_work_for(ShapeCase s, const ProblemDims& d) {
    const double fl = flops_for(s, d);
    if (s == ShapeCase::TRSP) {
        // loop 1 over the right-hand-side columns
        return {d.n, fl / static_cast<double>(d.n)};
    }
    // loop 3 over the rows of the output
    return {d.m, fl / static_cast<double>(d.m)};
}

namespace {

struct CaseData {
    DenseMatrix a;  // structured operand for symm/trmm/trsm; A otherwise
    DenseMatrix b;
    DenseMatrix c;
};

CaseData make_case(ShapeCase s, const ProblemDims& d, std::uint64_t seed) {
    CaseData cd;
    const KernelId k = kernel_of_shape(s);
    switch (k) {
        case KernelId::gemm:
            cd.a = make_uniform(d.m, d.k, seed);
            cd.b = make_uniform(d.k, d.n, seed + 1);
            cd.c = make_uniform(d.m, d.n, seed + 2);
            break;
        case KernelId::symm: {
            index_t adim = s == ShapeCase::SYMP ? d.m : d.n;
            cd.a = make_uniform(adim, adim, seed);
            cd.b = make_uniform(d.m, d.n, seed + 1);
            cd.c = make_uniform(d.m, d.n, seed + 2);
            break;
        }
        case KernelId::trmm:
        case KernelId::trsm: {
            index_t adim = (s == ShapeCase::TRMP || s == ShapeCase::TRSP) ? d.m : d.n;
            cd.a = make_uniform(adim, adim, seed, -0.5, 0.5);
            // dominant diagonal keeps the solve well conditioned
            for (index_t i = 0; i < adim; ++i) cd.a(i, i) = static_cast<double>(adim) + 1.0;
            cd.b = make_uniform(d.m, d.n, seed + 1);
            break;
        }
        case KernelId::syrk:
        case KernelId::syr2k:
            cd.a = make_uniform(d.k, d.n, seed);
            if (k == KernelId::syr2k) cd.b = make_uniform(d.k, d.n, seed + 1);
            cd.c = make_uniform(d.n, d.n, seed + 2);
            break;
    }
    return cd;
}

void run_kernel(ShapeCase s, Strategy st, CaseData& cd, const MachineModel& machine,
                const BlockingParams& params) {
    switch (kernel_of_shape(s)) {
        case KernelId::gemm:
            gemm(cd.c.view(), cd.a.view(), cd.b.view(), machine, st, params);
            break;
        case KernelId::symm:
            symm(cd.c.view(), cd.a.view(), cd.b.view(),
                 s == ShapeCase::SYMP ? Side::Left : Side::Right, machine, st, params);
            break;
        case KernelId::trmm:
            trmm(cd.b.view(), cd.a.view(), s == ShapeCase::TRMP ? Side::Left : Side::Right,
                 Diag::NonUnit, machine, st, params);
            break;
        case KernelId::trsm:
            trsm(cd.b.view(), cd.a.view(), s == ShapeCase::TRSP ? Side::Left : Side::Right,
                 Diag::NonUnit, machine, st, params);
            break;
        case KernelId::syrk:
            syrk(cd.c.view(), cd.a.view(), machine, st, params);
            break;
        case KernelId::syr2k:
            syr2k(cd.c.view(), cd.a.view(), cd.b.view(), machine, st, params);
            break;
    }
}

void run_reference(ShapeCase s, CaseData& cd) {
    switch (kernel_of_shape(s)) {
        case KernelId::gemm:
            oracle_gemm(cd.c.view(), cd.a.view(), cd.b.view());
            break;
        case KernelId::symm:
            oracle_symm(cd.c.view(), cd.a.view(), cd.b.view(),
                        s == ShapeCase::SYMP ? Side::Left : Side::Right);
            break;
        case KernelId::trmm:
            oracle_trmm(cd.b.view(), cd.a.view(), s == ShapeCase::TRMP ? Side::Left : Side::Right,
                        Diag::NonUnit);
            break;
        case KernelId::trsm:
            oracle_trsm(cd.b.view(), cd.a.view(), s == ShapeCase::TRSP ? Side::Left : Side::Right,
                        Diag::NonUnit);
            break;
        case KernelId::syrk:
            oracle_syrk(cd.c.view(), cd.a.view());
            break;
        case KernelId::syr2k:
            oracle_syr2k(cd.c.view(), cd.a.view(), cd.b.view());
            break;
    }
}

ConstMatrixView output_of(ShapeCase s, CaseData& cd) {
    const KernelId k = kernel_of_shape(s);
    if (k == KernelId::trmm || k == KernelId::trsm) return cd.b.view();
    return cd.c.view();
}

}  // namespace

ShapeCheck verify_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                        const MachineModel& machine, const BlockingParams& params,
                        std::uint64_t seed) {
    if (!is_admissible(s, st))
        throw std::invalid_argument("shape " + to_string(s) + " does not admit strategy " +
                                    to_string(st));
    const ProblemDims d = dims_for(s, size, panel);
    CaseData engine_data = make_case(s, d, seed);
    CaseData oracle_data = make_case(s, d, seed);
    run_kernel(s, st, engine_data, machine, params);
    run_reference(s, oracle_data);

    ShapeCheck chk;
    chk.rel_error = rel_error(output_of(s, engine_data), output_of(s, oracle_data));
    const index_t inner = kernel_of_shape(s) == KernelId::trsm
                              ? (s == ShapeCase::TRSP ? d.m : d.n)
                              : d.k;
    chk.tolerance = 1e-12 * std::sqrt(static_cast<double>(inner));
    chk.pass = chk.rel_error <= chk.tolerance;
    return chk;
}

DenseMatrix run_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                      const MachineModel& machine, const BlockingParams& params,
                      std::uint64_t seed) {
    const ProblemDims d = dims_for(s, size, panel);
    CaseData cd = make_case(s, d, seed);
    run_kernel(s, st, cd, machine, params);
    ConstMatrixView out = output_of(s, cd);
    DenseMatrix copy(out.rows, out.cols);
    copy_into(copy.view(), out);
    return copy;
}

double time_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                  const MachineModel& machine, const BlockingParams& params, std::uint64_t seed) {
    const ProblemDims d = dims_for(s, size, panel);
    CaseData cd = make_case(s, d, seed);
    auto t0 = std::chrono::steady_clock::now();
    run_kernel(s, st, cd, machine, params);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double time_shape_reference(ShapeCase s, index_t size, index_t panel, std::uint64_t seed) {
    const ProblemDims d = dims_for(s, size, panel);
    CaseData cd = make_case(s, d, seed);
    auto t0 = std::chrono::steady_clock::now();
    run_reference(s, cd);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace ampblas
