#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qres
{
    /// Worker count; 0 means "one per hardware thread".
    inline unsigned resolve_workers(unsigned requested)
    {
        if (requested != 0) return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /**
     * Runs body(i) for every block index in [0, blocks) on a pool of workers.
     *
     * Blocks are claimed in increasing order from a shared counter. Results must
     * be written to per-block slots by the caller so the merge does not depend
     * on scheduling. The first exception thrown by any block is rethrown here.
     */
    template <typename Body>
    void for_each_block(std::size_t blocks, unsigned workers, Body&& body)
    {
        workers = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(blocks, 1));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < blocks; ++i) body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
            {
                pool.emplace_back([&] {
                    for (;;)
                    {
                        std::size_t i = next.fetch_add(1);
                        if (i >= blocks) return;
                        try
                        {
                            body(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                            next.store(blocks);
                            return;
                        }
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }
}
