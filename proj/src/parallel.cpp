#include "ampblas/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>

namespace ampblas {

WriteRecorder::WriteRecorder(int workers, index_t out_rows, index_t out_cols)
    : rows_(out_rows), cols_(out_cols), per_worker_(workers) {}

void WriteRecorder::record(int worker, std::int64_t epoch, Rect r) {
    per_worker_[static_cast<std::size_t>(worker)].push_back({epoch, r});
}

std::int64_t WriteRecorder::event_count() const {
    std::int64_t n = 0;
    for (const auto& v : per_worker_) n += static_cast<std::int64_t>(v.size());
    return n;
}

std::int64_t WriteRecorder::count_collisions() const {
    struct Tagged {
        std::int64_t epoch;
        int worker;
        Rect rect;
    };
    std::vector<Tagged> all;
    for (int w = 0; w < static_cast<int>(per_worker_.size()); ++w)
        for (const auto& e : per_worker_[w]) all.push_back({e.epoch, w, e.rect});
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.epoch < b.epoch; });

    // owner grid stamped per epoch; a cell owned by another worker in the
    // same epoch is a collision.
    std::vector<std::int64_t> stamp(static_cast<std::size_t>(rows_ * cols_), -1);
    std::vector<int> owner(static_cast<std::size_t>(rows_ * cols_), -1);
    std::int64_t collisions = 0;
    for (const auto& e : all) {
        for (index_t j = e.rect.col_begin; j < e.rect.col_end; ++j)
            for (index_t i = e.rect.row_begin; i < e.rect.row_end; ++i) {
                std::size_t cell = static_cast<std::size_t>(j * rows_ + i);
                if (stamp[cell] == e.epoch && owner[cell] != e.worker)
                    ++collisions;
                stamp[cell] = e.epoch;
                owner[cell] = e.worker;
            }
    }
    return collisions;
}

namespace {
WriteRecorder* g_recorder = nullptr;

// Epochs stay distinct across successive parallel regions so a recorder can
// span multi-region kernels (e.g. the two syr2k passes).
std::atomic<std::int64_t> g_region_counter{0};
}

namespace testing {
void install_write_recorder(WriteRecorder* rec) { g_recorder = rec; }
WriteRecorder* write_recorder() { return g_recorder; }
}  // namespace testing

void run_parallel(const MachineModel& machine, const std::function<void(Worker&)>& body) {
    machine.validate();
    const int w = machine.total_cores();
    const std::int64_t epoch_base = g_region_counter.fetch_add(1) << 24;

    if (w == 1) {
        Barrier team(1), cls(1);
        Worker solo;
        solo.class_size = machine.classes[0].core_count;
        solo.team_barrier = &team;
        solo.class_barrier = &cls;
        solo.sync_epoch = epoch_base;
        body(solo);
        return;
    }

    Barrier team(w);
    std::vector<Barrier> class_barriers(machine.classes.size());
    for (std::size_t c = 0; c < machine.classes.size(); ++c)
        class_barriers[c].reset(machine.classes[c].core_count);

    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;

    omp_set_dynamic(0);
#pragma omp parallel num_threads(w)
    {
        int id = omp_get_thread_num();
        if (omp_get_num_threads() != w) {
            // Requested team unavailable; surface as an error from thread 0.
            if (id == 0) {
                std::lock_guard<std::mutex> lk(error_mutex);
                first_error = std::make_exception_ptr(
                    std::runtime_error("OpenMP did not provide the requested worker count"));
            }
        } else {
            Worker me;
            me.id = id;
            me.class_id = machine.class_of_worker(id);
            me.rank_in_class = machine.rank_in_class(id);
            me.class_size = machine.classes[me.class_id].core_count;
            me.team_size = w;
            me.sync_epoch = epoch_base;
            me.team_barrier = &team;
            me.class_barrier = &class_barriers[me.class_id];
            try {
                body(me);
            } catch (...) {
                // engine bodies report errors through flags, never throw
                // mid-region; a throw from inside a barrier scope would
                // strand the peers
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    }

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ampblas
