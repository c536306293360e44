#pragma once

// Internal: run a per-segment job over [1, x] on a worker pool, merging results in
// ascending segment order so the outcome is independent of the thread count.

#include <algorithm>
#include <cstdint>
#include <future>
#include <vector>

namespace pfpois::detail {

template <class Job, class Merge>
void for_each_segment(std::uint64_t x, std::uint64_t segment_size, unsigned threads, Job job,
                      Merge merge) {
    if (x == 0) return;
    segment_size = std::max<std::uint64_t>(segment_size, 1);
    const std::uint64_t n_segments = (x + segment_size - 1) / segment_size;
    const unsigned width = std::max(1u, threads);
    using Partial = decltype(job(std::uint64_t{}, std::uint64_t{}));
    for (std::uint64_t first = 0; first < n_segments; first += width) {
        const std::uint64_t last = std::min<std::uint64_t>(n_segments, first + width);
        std::vector<std::future<Partial>> wave;
        std::vector<Partial> inline_results;
        for (std::uint64_t s = first; s < last; ++s) {
            const std::uint64_t lo = s * segment_size + 1;
            const std::uint64_t hi = std::min(x, lo + segment_size - 1);
            if (width == 1) {
                inline_results.push_back(job(lo, hi));
            } else {
                wave.push_back(std::async(std::launch::async, job, lo, hi));
            }
        }
        for (auto& r : inline_results) merge(std::move(r));
        for (auto& f : wave) merge(f.get());
    }
}

}  // namespace pfpois::detail
