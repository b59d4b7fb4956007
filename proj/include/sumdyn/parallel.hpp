#ifndef SUMDYN_PARALLEL_HPP
#define SUMDYN_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace sumdyn {

// Thread count from SUMDYN_THREADS, else 1.
inline unsigned default_threads() {
  if (const char* env = std::getenv("SUMDYN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n). Chunk boundaries do not
// depend on the thread count, so per-chunk partial results combined in chunk order are
// identical for any number of threads.
template <class Fn>
void for_chunks(std::uint64_t n, std::uint64_t chunk, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  chunk = std::max<std::uint64_t>(chunk, 1);
  std::uint64_t chunks = (n + chunk - 1) / chunk;
  auto run = [&](std::uint64_t c) { fn(c, c * chunk, std::min(n, (c + 1) * chunk)); };
  if (threads <= 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t c = w; c < chunks; c += threads) run(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::uint64_t chunk_count(std::uint64_t n, std::uint64_t chunk) { return n == 0 ? 0 : (n + chunk - 1) / chunk; }

}  // namespace sumdyn

#endif
