#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sklab {

// Splits [0, count) into one contiguous chunk per worker and runs
// fn(lo, hi) on each.  Workers get disjoint ranges, so fn may keep chunk-local
// scratch and must write only to slots owned by indices in its range; under
// that contract results are identical for any worker count, because all
// randomness is derived from per-index stream ids, never from shared state.
// workers == 0 means one per available hardware thread.
inline void parallel_chunks(std::size_t count,
                            const std::function<void(std::size_t, std::size_t)>& fn,
                            unsigned workers = 0) {
  if (count == 0) {
    return;
  }
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
  }
  if (workers <= 1 || count == 1) {
    fn(0, count);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) {
      break;
    }
    pool.emplace_back([lo, hi, w, &fn, &errors] {
      try {
        fn(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (const auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
}

}  // namespace sklab
