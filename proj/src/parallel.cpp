#include "twkde/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace twkde {

namespace {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t
mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t
child_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
  return mix64(mix64(seed) + (stream + 1) * golden_gamma);
}

std::size_t
default_thread_count()
{
  if (const char* env = std::getenv("TWKDE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1)
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void
parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task)
{
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      task(i);
    return;
  }

  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error)
          first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back(worker);
  for (auto& th : pool)
    th.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

} // namespace twkde
