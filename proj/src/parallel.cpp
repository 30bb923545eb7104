#include "declab/parallel.hpp"

#include <thread>
#include <vector>

namespace declab {

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t w = workers < 1 ? 1 : std::size_t(workers);
  if (w > n) w = n;
  if (w == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  std::size_t chunk = n / w;
  std::size_t rem = n % w;
  std::size_t begin = 0;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < w; ++i) {
    std::size_t len = chunk + (i < rem ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  for (std::size_t i = 1; i < w; ++i)
    pool.emplace_back([&, i] { fn(ranges[i].first, ranges[i].second); });
  fn(ranges[0].first, ranges[0].second);
  for (auto& th : pool) th.join();
}

int default_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

}  // namespace declab
