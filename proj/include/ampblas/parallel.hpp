#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "ampblas/machine.hpp"

namespace ampblas {

/// Sense-reversing barrier over C++20 atomic wait; cheap under the thread
/// oversubscription that happens when 8 modeled cores run on fewer hardware
/// cores.
class Barrier {
public:
    explicit Barrier(int parties = 1) : parties_(parties) {}

    void reset(int parties) {
        parties_ = parties;
        count_.store(0, std::memory_order_relaxed);
        sense_.store(0, std::memory_order_relaxed);
    }

    void arrive_and_wait() {
        if (parties_ <= 1) return;
        int s = sense_.load(std::memory_order_relaxed);
        if (count_.fetch_add(1, std::memory_order_acq_rel) + 1 == parties_) {
            count_.store(0, std::memory_order_relaxed);
            sense_.store(1 - s, std::memory_order_release);
            sense_.notify_all();
        } else {
            while (sense_.load(std::memory_order_acquire) == s) sense_.wait(s);
        }
    }

private:
    int parties_;
    std::atomic<int> count_{0};
    std::atomic<int> sense_{0};
};

struct Rect {
    index_t row_begin = 0, row_end = 0;
    index_t col_begin = 0, col_end = 0;
};

/// Records which output elements each worker wrote in which synchronization
/// epoch. Epochs are delimited by team barriers; the engine guarantees that,
/// within an epoch, no element is touched by two workers. count_collisions()
/// rasterizes the recorded tiles and reports violations.
class WriteRecorder {
public:
    WriteRecorder(int workers, index_t out_rows, index_t out_cols);

    void record(int worker, std::int64_t epoch, Rect r);
    std::int64_t count_collisions() const;
    std::int64_t event_count() const;

private:
    struct Event {
        std::int64_t epoch;
        Rect rect;
    };
    index_t rows_, cols_;
    std::vector<std::vector<Event>> per_worker_;
};

namespace testing {
/// Installs a recorder observed by every engine kernel until cleared.
/// Kernel calls are expected to be sequential while a recorder is installed.
void install_write_recorder(WriteRecorder* rec);
WriteRecorder* write_recorder();
}  // namespace testing

/// Per-worker context inside a blocking parallel region. sync_epoch counts
/// the team barriers this worker crossed; class barriers do not advance it.
struct Worker {
    int id = 0;
    int class_id = 0;
    int rank_in_class = 0;
    int class_size = 1;
    int team_size = 1;
    std::int64_t sync_epoch = 0;

    Barrier* team_barrier = nullptr;
    Barrier* class_barrier = nullptr;

    void team_sync() {
        team_barrier->arrive_and_wait();
        ++sync_epoch;
    }
    void class_sync() { class_barrier->arrive_and_wait(); }

    void note_write(Rect r) const {
        if (WriteRecorder* rec = testing::write_recorder())
            rec->record(id, sync_epoch, r);
    }
};

/// Runs `body` once per modeled core as a blocking parallel region (OpenMP
/// threads; a single-core machine runs inline). Exceptions thrown by workers
/// are captured and the first one rethrown after the region ends.
void run_parallel(const MachineModel& machine, const std::function<void(Worker&)>& body);

}  // namespace ampblas
