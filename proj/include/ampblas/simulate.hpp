#pragma once

#include <vector>

#include "ampblas/machine.hpp"
#include "ampblas/strategy.hpp"

namespace ampblas {

struct SimReport {
    std::vector<double> busy;  // per core
    std::vector<double> idle;  // makespan - busy
    double makespan = 0.0;
    double ideal_makespan = 0.0;
    double idle_fraction = 0.0;
};

/// Deterministic event-driven replay of one loop-3 pass over
/// `total_work_units` iterations. Each core claims work per the strategy
/// (dynamic dispenser with its class stride, or a static pre-assignment) and
/// consumes a chunk of width w in time w * per_chunk_cost / relative_speed.
/// Packing and synchronization are charged zero cost: the simulator measures
/// partitioning quality, not cache behaviour, and its makespans are not
/// performance predictions.
SimReport simulate(index_t total_work_units, const MachineModel& machine, Strategy strategy,
                   double per_chunk_cost = 1.0);

/// Sum over classes of core_count * serial_rate. `serial_rates` holds one
/// GFLOPS figure per class, in class order.
double ideal_peak(const MachineModel& machine, const std::vector<double>& serial_rates);

}  // namespace ampblas
