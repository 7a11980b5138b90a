#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ustlocal/random.hpp"

namespace ustlocal::harness {

/// 0 means one thread per hardware core.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs fn(task_index, rng) for task_index in [0, tasks) on up to `threads`
/// workers and returns the results in task order. Task i always receives
/// derive_rng(seed, stream + i), so output never depends on scheduling.
/// The first exception thrown by any task is rethrown after all workers stop.
template <class Result, class Fn>
std::vector<Result> run_tasks(std::size_t tasks, unsigned threads, std::uint64_t seed,
                              std::uint64_t stream, Fn&& fn) {
  std::vector<Result> results(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        Rng rng = derive_rng(seed, stream + i);
        results[i] = fn(i, rng);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };
  const unsigned count = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(tasks, 1));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Splits `items` into fixed chunks so per-task overhead stays small while the
/// chunk boundaries (and therefore the streams) stay independent of threads.
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<Chunk> make_chunks(std::size_t items, std::size_t chunk_size);

}  // namespace ustlocal::harness
