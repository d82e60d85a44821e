#include "smalldev/parallel.hpp"

#include <atomic>

namespace smalldev {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_thread_count() {
  const unsigned n = g_threads.load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_thread_count(unsigned n) { g_threads.store(n); }

}  // namespace smalldev
