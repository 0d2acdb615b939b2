#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace twkde {

//! Seed for the `stream`-th independent substream of `seed`
//! (splitmix64 finaliser over a counter offset).
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

//! Worker count from $TWKDE_THREADS, else the hardware concurrency (>= 1).
std::size_t default_thread_count();

//! Runs task(i) for i in [0, count) on up to `threads` workers. Tasks are
//! claimed dynamically; callers write results into slot i so the outcome
//! does not depend on the schedule. The first exception is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

} // namespace twkde
