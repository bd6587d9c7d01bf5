#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sme {

//! Runs `tasks` on up to `jobs` worker threads. Tasks are independent; the
//! i-th task writes its own result slot, so collection order is by index.
//! The first exception thrown by any task is re-thrown on the caller thread
//! after all workers stop.
inline void run_jobs(std::size_t jobs, const std::vector<std::function<void()>>& tasks)
{
  if (tasks.empty())
    return;
  if (jobs <= 1) {
    for (const auto& t : tasks)
      t();
    return;
  }
  jobs = std::min(jobs, tasks.size());
  std::atomic<std::size_t> next{ 0 };
  std::atomic<bool> failed{ false };
  std::exception_ptr first_error;
  std::mutex err_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size() || failed.load())
        return;
      try {
        tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error)
          first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

//! Default parallelism: SME_JOBS environment variable, else hardware threads.
std::size_t default_jobs();

} // namespace sme
