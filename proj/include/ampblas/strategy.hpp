#pragma once

#include <string>

namespace ampblas {

/// Parallelization strategies. D3S4/D3S5 pair a dynamic chunk dispenser on
/// loop 3 with a static split of loop 4 (resp. 5) inside each core class.
/// ObS4 splits loop 4 evenly across all cores, ignoring class speeds; it is
/// kept as a negative baseline and never auto-selected. S1S4, S3 and S3S5 are
/// the static variants for the triangular solve.
enum class Strategy { D3S4, D3S5, ObS4, S1S4, S3, S3S5 };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

inline bool is_dynamic(Strategy s) {
    return s == Strategy::D3S4 || s == Strategy::D3S5;
}

}  // namespace ampblas
