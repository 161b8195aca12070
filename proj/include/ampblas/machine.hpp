#pragma once

#include <string>
#include <vector>

#include "ampblas/matrix.hpp"

namespace ampblas {

enum class MachineMode { Real, Simulated };

struct CoreClassDesc {
    std::string name;
    int core_count = 1;
    double relative_speed = 1.0;
    index_t mc_stride = 152;
    index_t small_m_mc_stride = 116;
};

/// Description of the core classes of a (possibly asymmetric) machine.
/// Classes are ordered fastest first; worker ids are assigned class by class.
struct MachineModel {
    std::vector<CoreClassDesc> classes;
    MachineMode mode = MachineMode::Real;

    int total_cores() const;
    int class_of_worker(int worker) const;
    int rank_in_class(int worker) const;
    int class_base(int cls) const;

    void validate() const;
};

/// Two classes of four cores each, speeds 6:1, strides (152,32)/(116,24).
MachineModel default_machine(MachineMode mode = MachineMode::Real);

/// Single class, single core; used for serial reference runs.
MachineModel serial_machine();

// Key-value machine file:
//   class <name> count=<int> speed=<float> mc=<int> mc_small=<int>
//   mode=real|sim
MachineModel parse_machine(std::istream& is);
MachineModel load_machine_file(const std::string& path);
void write_machine(std::ostream& os, const MachineModel& m);

}  // namespace ampblas
