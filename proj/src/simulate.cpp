#include "ampblas/simulate.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "ampblas/partition.hpp"

namespace ampblas {

namespace {

struct CoreEvent {
    double time;
    int core;
    bool operator>(const CoreEvent& o) const {
        if (time != o.time) return time > o.time;
        return core > o.core;
    }
};

SimReport finish_report(std::vector<double> busy, double makespan, index_t total,
                        const MachineModel& machine, double cost) {
    SimReport r;
    const int w = machine.total_cores();
    double rate_sum = 0.0;
    for (const auto& c : machine.classes) rate_sum += c.core_count * c.relative_speed;
    r.busy = std::move(busy);
    r.makespan = makespan;
    r.ideal_makespan = static_cast<double>(total) * cost / rate_sum;
    r.idle.resize(w);
    double busy_sum = 0.0;
    for (int i = 0; i < w; ++i) {
        r.idle[i] = r.makespan - r.busy[i];
        busy_sum += r.busy[i];
    }
    r.idle_fraction =
        r.makespan > 0.0 ? 1.0 - busy_sum / (r.makespan * static_cast<double>(w)) : 0.0;
    return r;
}

SimReport simulate_dynamic(index_t total, const MachineModel& machine, double cost) {
    const int w = machine.total_cores();
    std::vector<double> busy(w, 0.0);
    std::priority_queue<CoreEvent, std::vector<CoreEvent>, std::greater<CoreEvent>> free_at;
    for (int i = 0; i < w; ++i) free_at.push({0.0, i});
    index_t cursor = 0;
    double makespan = 0.0;
    while (cursor < total) {
        CoreEvent ev = free_at.top();
        free_at.pop();
        const auto& cls = machine.classes[machine.class_of_worker(ev.core)];
        index_t width = std::min(cls.mc_stride, total - cursor);
        cursor += width;
        double dt = static_cast<double>(width) * cost / cls.relative_speed;
        busy[ev.core] += dt;
        double done = ev.time + dt;
        makespan = std::max(makespan, done);
        free_at.push({done, ev.core});
    }
    return finish_report(std::move(busy), makespan, total, machine, cost);
}

SimReport simulate_static(index_t total, const MachineModel& machine, Strategy strategy,
                          double cost) {
    const int w = machine.total_cores();
    std::vector<index_t> per_core(w, 0);

    if (strategy == Strategy::ObS4) {
        // Asymmetry-oblivious: even split over all cores.
        auto shares = split_even(total, w);
        per_core.assign(shares.begin(), shares.end());
    } else if (strategy == Strategy::S3) {
        // One share per core, weighted by its class speed.
        std::vector<double> weights;
        for (const auto& c : machine.classes)
            weights.insert(weights.end(), c.core_count, c.relative_speed);
        auto shares = split_static(total, weights);
        per_core.assign(shares.begin(), shares.end());
    } else if (strategy == Strategy::S1S4 || strategy == Strategy::S3S5) {
        // Coarse split between classes by count*speed, then even within class.
        std::vector<double> cls_weights;
        for (const auto& c : machine.classes)
            cls_weights.push_back(c.core_count * c.relative_speed);
        auto cls_shares = split_static(total, cls_weights);
        int base = 0;
        for (std::size_t c = 0; c < machine.classes.size(); ++c) {
            auto inner = split_even(cls_shares[c], machine.classes[c].core_count);
            for (int r = 0; r < machine.classes[c].core_count; ++r) per_core[base + r] = inner[r];
            base += machine.classes[c].core_count;
        }
    } else {
        throw std::invalid_argument("simulate: unknown strategy");
    }

    std::vector<double> busy(w, 0.0);
    double makespan = 0.0;
    for (int i = 0; i < w; ++i) {
        double speed = machine.classes[machine.class_of_worker(i)].relative_speed;
        busy[i] = static_cast<double>(per_core[i]) * cost / speed;
        makespan = std::max(makespan, busy[i]);
    }
    return finish_report(std::move(busy), makespan, total, machine, cost);
}

}  // namespace

SimReport simulate(index_t total_work_units, const MachineModel& machine, Strategy strategy,
                   double per_chunk_cost) {
    machine.validate();
    if (total_work_units < 0) throw std::invalid_argument("simulate: negative work");
    if (is_dynamic(strategy)) return simulate_dynamic(total_work_units, machine, per_chunk_cost);
    return simulate_static(total_work_units, machine, strategy, per_chunk_cost);
}

double ideal_peak(const MachineModel& machine, const std::vector<double>& serial_rates) {
    if (serial_rates.size() != machine.classes.size())
        throw std::invalid_argument("ideal_peak: need one serial rate per core class");
    double sum = 0.0;
    for (std::size_t c = 0; c < machine.classes.size(); ++c)
        sum += machine.classes[c].core_count * serial_rates[c];
    return sum;
}

}  // namespace ampblas
