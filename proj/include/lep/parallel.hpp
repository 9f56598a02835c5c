#pragma once

// Deterministic block parallelism: work is cut into fixed index blocks, any
// worker may take any block, and results come back indexed by block so the
// caller merges them in a fixed order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lep {

/// `make_ctx()` builds per-worker scratch; `work(ctx, begin, end)` returns the
/// result for the half-open index range [begin, end).
template <class MakeCtx, class Work>
auto run_blocks(std::size_t n, std::size_t block, unsigned workers, MakeCtx make_ctx, Work work) {
  using Ctx = decltype(make_ctx());
  using Result = decltype(work(std::declval<Ctx&>(), std::size_t{}, std::size_t{}));
  if (block == 0) throw std::invalid_argument("run_blocks: block size must be positive");
  if (workers == 0) throw std::invalid_argument("run_blocks: need at least one worker");
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<Result> results(nblocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto body = [&] {
    try {
      Ctx ctx = make_ctx();
      for (std::size_t b; !stop.load(std::memory_order_relaxed) && (b = next.fetch_add(1)) < nblocks;) {
        const std::size_t begin = b * block;
        results[b] = work(ctx, begin, std::min(n, begin + block));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(nblocks, 1)));
  if (nthreads <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace lep
