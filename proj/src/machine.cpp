#include "ampblas/machine.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ampblas {

int MachineModel::total_cores() const {
    int n = 0;
    for (const auto& c : classes) n += c.core_count;
    return n;
}

int MachineModel::class_of_worker(int worker) const {
    int base = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (worker < base + classes[c].core_count) return static_cast<int>(c);
        base += classes[c].core_count;
    }
    throw std::out_of_range("worker id out of range");
}

int MachineModel::rank_in_class(int worker) const {
    return worker - class_base(class_of_worker(worker));
}

int MachineModel::class_base(int cls) const {
    int base = 0;
    for (int c = 0; c < cls; ++c) base += classes[c].core_count;
    return base;
}

void MachineModel::validate() const {
    if (classes.empty()) throw std::invalid_argument("machine model needs at least one class");
    for (const auto& c : classes) {
        if (c.core_count < 1) throw std::invalid_argument("core class count must be >= 1");
        if (!(c.relative_speed > 0.0))
            throw std::invalid_argument("core class speed must be positive");
        if (c.mc_stride < 1 || c.small_m_mc_stride < 1)
            throw std::invalid_argument("core class mc strides must be >= 1");
    }
}

MachineModel default_machine(MachineMode mode) {
    MachineModel m;
    m.classes.push_back({"fast", 4, 6.0, 152, 116});
    m.classes.push_back({"slow", 4, 1.0, 32, 24});
    m.mode = mode;
    return m;
}

MachineModel serial_machine() {
    MachineModel m;
    m.classes.push_back({"solo", 1, 1.0, 152, 116});
    m.mode = MachineMode::Real;
    return m;
}

namespace {

bool parse_kv(const std::string& tok, const std::string& key, std::string& out) {
    if (tok.rfind(key + "=", 0) != 0) return false;
    out = tok.substr(key.size() + 1);
    return true;
}

}  // namespace

MachineModel parse_machine(std::istream& is) {
    MachineModel m;
    m.classes.clear();
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') continue;
        if (first == "class") {
            CoreClassDesc c;
            if (!(ls >> c.name))
                throw std::runtime_error("machine file line " + std::to_string(lineno) +
                                         ": class needs a name");
            std::string tok, v;
            while (ls >> tok) {
                if (parse_kv(tok, "count", v)) c.core_count = std::stoi(v);
                else if (parse_kv(tok, "speed", v)) c.relative_speed = std::stod(v);
                else if (parse_kv(tok, "mc", v)) c.mc_stride = std::stoll(v);
                else if (parse_kv(tok, "mc_small", v)) c.small_m_mc_stride = std::stoll(v);
                else
                    throw std::runtime_error("machine file line " + std::to_string(lineno) +
                                             ": unknown key '" + tok + "'");
            }
            m.classes.push_back(c);
        } else if (first.rfind("mode=", 0) == 0) {
            std::string v = first.substr(5);
            if (v == "real") m.mode = MachineMode::Real;
            else if (v == "sim") m.mode = MachineMode::Simulated;
            else
                throw std::runtime_error("machine file line " + std::to_string(lineno) +
                                         ": mode must be real or sim");
        } else {
            throw std::runtime_error("machine file line " + std::to_string(lineno) +
                                     ": expected 'class' or 'mode='");
        }
    }
    m.validate();
    return m;
}

MachineModel load_machine_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open machine file " + path);
    return parse_machine(is);
}

void write_machine(std::ostream& os, const MachineModel& m) {
    for (const auto& c : m.classes)
        os << "class " << c.name << " count=" << c.core_count << " speed=" << c.relative_speed
           << " mc=" << c.mc_stride << " mc_small=" << c.small_m_mc_stride << '\n';
    os << (m.mode == MachineMode::Real ? "mode=real" : "mode=sim") << '\n';
}

}  // namespace ampblas
