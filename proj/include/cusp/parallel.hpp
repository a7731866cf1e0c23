#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cusp {

/// Calls work(i) for 0 <= i < n on up to `jobs` threads; rethrows the first error by index.
template <class Work> void parallel_for(std::size_t n, unsigned jobs, Work &&work)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto run = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                work(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const auto threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(run);
    run();
    for (auto &t : pool) t.join();
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace cusp
