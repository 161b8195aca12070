#include "ampblas/strategy.hpp"

#include <stdexcept>

namespace ampblas {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::D3S4: return "D3S4";
        case Strategy::D3S5: return "D3S5";
        case Strategy::ObS4: return "ObS4";
        case Strategy::S1S4: return "S1S4";
        case Strategy::S3: return "S3";
        case Strategy::S3S5: return "S3S5";
    }
    return "?";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "D3S4") return Strategy::D3S4;
    if (name == "D3S5") return Strategy::D3S5;
    if (name == "ObS4") return Strategy::ObS4;
    if (name == "S1S4") return Strategy::S1S4;
    if (name == "S3") return Strategy::S3;
    if (name == "S3S5") return Strategy::S3S5;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

}  // namespace ampblas
