#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace gpx {

/// 0 means "all hardware threads".
unsigned resolve_workers(unsigned workers);

/// Sum with a fixed binary-tree shape, independent of how the inputs were produced.
double pairwise_sum(std::span<const double> xs);

/// Calls body(begin, end, worker_index) on contiguous slices of [0, count),
/// one slice per worker. Exceptions from workers are rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    const unsigned w = static_cast<unsigned>(
        std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
    if (w <= 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(w);
    const std::size_t per = (count + w - 1) / w;
    for (unsigned i = 0; i < w; ++i) {
        const std::size_t begin = std::min(count, per * i);
        const std::size_t end = std::min(count, begin + per);
        threads.emplace_back([&, i, begin, end] {
            try {
                body(begin, end, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Deterministic map-reduce over [0, count): items are grouped into chunks of
/// fixed size, each chunk is folded sequentially into a fresh accumulator, and
/// chunk results are merged in a fixed pairwise tree. The result does not
/// depend on the number of workers.
template <class Acc, class MakeAcc, class Fold, class Merge>
Acc chunked_reduce(std::size_t count, std::size_t chunk, unsigned workers, MakeAcc make_acc,
                   Fold fold, Merge merge) {
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n_chunks = (count + chunk - 1) / chunk;
    std::vector<Acc> partial;
    partial.reserve(n_chunks);
    for (std::size_t i = 0; i < n_chunks; ++i) {
        partial.push_back(make_acc());
    }
    parallel_for(n_chunks, workers, [&](std::size_t begin, std::size_t end, unsigned worker) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::size_t lo = c * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            for (std::size_t item = lo; item < hi; ++item) {
                fold(partial[c], item, worker);
            }
        }
    });
    if (partial.empty()) {
        return make_acc();
    }
    for (std::size_t width = 1; width < partial.size(); width *= 2) {
        for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) {
            merge(partial[i], partial[i + width]);
        }
    }
    return std::move(partial[0]);
}

}  // namespace gpx
