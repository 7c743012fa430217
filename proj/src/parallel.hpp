#ifndef VSEL_PARALLEL_HPP
#define VSEL_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace vsel {

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// The chunk layout depends only on n and grain, never on the thread count, so
// per-chunk partial results can be combined in chunk order and parallel runs
// reproduce serial ones.
template <typename F>
void parallel_chunks(std::size_t n, std::size_t grain, unsigned threads, F&& fn) {
    if (grain == 0) grain = 1;
    const std::size_t nchunks = (n + grain - 1) / grain;
    if (threads <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c, c * grain, std::min(n, (c + 1) * grain));
        return;
    }
    std::vector<std::thread> pool;
    const unsigned nt = std::min<std::size_t>(threads, nchunks);
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t c = t; c < nchunks; c += nt)
                fn(c, c * grain, std::min(n, (c + 1) * grain));
        });
    }
    for (auto& th : pool) th.join();
}

// Kahan accumulator for order-stable reductions.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    void merge(const Kahan& o) {
        add(o.sum);
        add(-o.c);
    }
};

} // namespace vsel

#endif
