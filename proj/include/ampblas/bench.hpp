#pragma once

#include <string>
#include <vector>

#include "ampblas/blas3.hpp"
#include "ampblas/machine.hpp"
#include "ampblas/strategy.hpp"

namespace ampblas {

enum class KernelId { gemm, symm, trmm, trsm, syrk, syr2k };

/// Shape cases of the evaluation grid: the structured/fixed dimension is the
/// algorithmic panel size, the free dimensions take the sweep size.
enum class ShapeCase { SQUARE, GEPP, GEMP, GEPM, SYMP, SYPM, TRMP, TRPM, TRSP, TRPS, SYRK_N, SYR2K_N };

std::string to_string(KernelId k);
std::string to_string(ShapeCase s);
KernelId parse_kernel(const std::string& name);
ShapeCase parse_shape(const std::string& name);

KernelId kernel_of_shape(ShapeCase s);
std::vector<ShapeCase> shapes_of_kernel(KernelId k);
const std::vector<ShapeCase>& all_shapes();

/// The strategies a shape case may legally run with.
std::vector<Strategy> admissible_strategies(ShapeCase s);
bool is_admissible(ShapeCase s, Strategy st);

/// Simulator replays additionally accept the oblivious ObS4 baseline for the
/// dynamic-family kernels; nothing touches the engine in that mode.
bool is_admissible_simulated(ShapeCase s, Strategy st);

struct ProblemDims {
    index_t m = 0, n = 0, k = 0;
};

/// Operand dimensions for a shape at sweep size `size` and panel `panel`.
ProblemDims dims_for(ShapeCase s, index_t size, index_t panel);

double flops_for(ShapeCase s, const ProblemDims& d);

/// Loop total and per-iteration cost used when a run is replayed on the
/// scheduling simulator instead of real hardware.
struct SimWork {
    index_t total = 0;
    double per_unit_cost = 1.0;
};
SimWork sim_work_for(ShapeCase s, const ProblemDims& d);

struct ShapeCheck {
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Runs one (shape, strategy) case against the serial reference kernels on
/// seeded random operands and reports the relative Frobenius error.
ShapeCheck verify_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                        const MachineModel& machine, const BlockingParams& params,
                        std::uint64_t seed);

/// Output matrix of one case run (C, or B for the in-place kernels); operands
/// are regenerated from the seed, so equal seeds mean equal inputs.
DenseMatrix run_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                      const MachineModel& machine, const BlockingParams& params,
                      std::uint64_t seed);

/// Seconds for one timed run of the case (inputs premade by the caller are
/// not needed; generation is excluded from the timing).
double time_shape(ShapeCase s, Strategy st, index_t size, index_t panel,
                  const MachineModel& machine, const BlockingParams& params, std::uint64_t seed);

/// Seconds for one run of the serial reference kernel on the same operands.
double time_shape_reference(ShapeCase s, index_t size, index_t panel, std::uint64_t seed);

double median(std::vector<double> values);

}  // namespace ampblas
