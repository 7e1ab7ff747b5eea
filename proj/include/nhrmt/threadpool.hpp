#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nhrmt::threads {

inline int default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Contiguous range of realization indices forming one work block.
struct Block {
    std::int64_t first = 0;
    std::int64_t last = 0;  // exclusive
    int index = 0;
};

// Splits [0, n_items) into roughly equal contiguous blocks.
inline std::vector<Block> make_blocks(std::int64_t n_items, int n_blocks) {
    if (n_blocks < 1) n_blocks = 1;
    if (n_blocks > n_items && n_items > 0) n_blocks = static_cast<int>(n_items);
    std::vector<Block> blocks;
    blocks.reserve(static_cast<std::size_t>(n_blocks));
    for (int b = 0; b < n_blocks; ++b) {
        Block blk;
        blk.first = n_items * b / n_blocks;
        blk.last = n_items * (b + 1) / n_blocks;
        blk.index = b;
        if (blk.last > blk.first) blocks.push_back(blk);
    }
    return blocks;
}

// Runs `work(block)` over all blocks on `n_threads` workers. Each block is
// processed by exactly one worker in realization order, so per-block results
// are bitwise independent of scheduling; callers combine them in block-index
// order to make the whole computation independent of the thread count.
inline void run_blocks(const std::vector<Block>& blocks,
                       int n_threads,
                       const std::function<void(const Block&)>& work) {
    if (n_threads < 1) n_threads = 1;
    if (blocks.empty()) return;
    if (n_threads == 1 || blocks.size() == 1) {
        for (const Block& b : blocks) work(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int n = std::min<std::size_t>(n_threads, blocks.size());
    workers.reserve(n);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (int w = 0; w < n; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= blocks.size() || failed.load()) return;
                try {
                    work(blocks[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace nhrmt::threads
