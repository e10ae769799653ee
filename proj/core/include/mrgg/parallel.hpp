#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace mrgg {

/// Worker count from a CLI request; MRGG_JOBS in the environment wins. Zero
/// means "hardware concurrency".
unsigned resolve_jobs(unsigned requested);

/// Evaluate fn(0..count-1) on up to `jobs` threads. Results are stored by
/// index, so the output never depends on scheduling. The exception of the
/// lowest failing index is rethrown.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, unsigned jobs,
                                 const std::function<Result(std::size_t)>& fn) {
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = jobs <= 1 || count <= 1
                               ? 1u
                               : static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace mrgg
