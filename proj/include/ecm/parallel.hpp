#ifndef ECM_PARALLEL_HPP
#define ECM_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace ecm {

// Runs fn(i) for i in [0, count) and returns the results in index order.
// Work is split across threads by contiguous ranges; the output slot i is
// written only by the thread owning i, so the result is independent of the
// schedule.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  if (count == 0) return out;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw < 2 || count < 4) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(hw, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// Pairwise tree reduction of an ordered list of partial sums; the result
// depends only on the input order, never on how the parts were produced.
inline double tree_reduce_sum(std::vector<double> parts) {
  if (parts.empty()) return 0.0;
  while (parts.size() > 1) {
    std::vector<double> next;
    next.reserve(parts.size() / 2 + 1);
    std::size_t i = 0;
    for (; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (i < parts.size()) next.push_back(parts[i]);
    parts = std::move(next);
  }
  return parts[0];
}

}  // namespace ecm

#endif
