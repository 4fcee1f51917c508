#include "heisenframe/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

namespace heisenframe {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int effective_threads() {
  int want = 0;
  if (const char* env = std::getenv("HEISENFRAME_THREADS")) {
    want = std::atoi(env);
    if (want < 0) want = 0;
  }
  if (want == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    want = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return want;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& run) {
  if (count == 0) return;
  std::size_t workers = static_cast<std::size_t>(effective_threads());
  if (workers > count) workers = count;
  if (workers <= 1) {
    run(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&run, lo, hi] { run(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace heisenframe
