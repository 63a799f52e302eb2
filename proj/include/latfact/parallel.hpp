#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace latfact {

// Runs produce(i) for i = 0, 1, ... on `workers` threads and feeds the results
// to consume(i, result) strictly in index order; stops once consume returns
// false or max_items results were consumed. produce must depend only on i, so
// the consumed sequence (and any decision made in consume) is identical for
// every worker count. Returns the number of items consumed.
template <typename Result, typename Produce, typename Consume>
std::size_t ordered_parallel_until(std::size_t workers, std::size_t max_items,
                                   Produce produce, Consume consume) {
    if (workers == 0) throw std::invalid_argument("ordered_parallel_until: zero workers");
    if (max_items == 0) return 0;

    if (workers == 1) {
        std::size_t i = 0;
        for (; i < max_items; ++i)
            if (!consume(i, produce(i))) return i + 1;
        return i;
    }

    struct Slot {
        Result value;
        std::exception_ptr error;
    };

    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, Slot> ready;
    std::size_t next_claim = 0;   // next index a worker may take
    std::size_t next_commit = 0;  // next index consume expects
    bool stopping = false;
    const std::size_t window = workers * 4;  // bounded lookahead

    auto worker_loop = [&] {
        for (;;) {
            std::size_t i;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return stopping || next_claim < next_commit + window; });
                if (stopping || next_claim >= max_items) return;
                i = next_claim++;
            }
            Slot slot;
            try {
                slot.value = produce(i);
            } catch (...) {
                slot.error = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                ready.emplace(i, std::move(slot));
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker_loop);

    auto shut_down = [&] {
        {
            std::lock_guard<std::mutex> lock(mu);
            stopping = true;
        }
        cv.notify_all();
        for (auto& t : pool) t.join();
    };

    std::size_t consumed = 0;
    try {
        while (next_commit < max_items) {
            Slot slot;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return ready.count(next_commit) != 0; });
                auto it = ready.find(next_commit);
                slot = std::move(it->second);
                ready.erase(it);
            }
            if (slot.error) std::rethrow_exception(slot.error);
            bool keep_going = consume(next_commit, std::move(slot.value));
            ++consumed;
            {
                std::lock_guard<std::mutex> lock(mu);
                ++next_commit;
            }
            cv.notify_all();
            if (!keep_going) break;
        }
    } catch (...) {
        shut_down();
        throw;
    }
    shut_down();
    return consumed;
}

}  // namespace latfact
