#include "angmom/parallel.hpp"
#include "angmom/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#ifndef ANGMOM_VERSION
#define ANGMOM_VERSION "0.0.0"
#endif

namespace angmom {

const char *version() { return ANGMOM_VERSION; }

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;

} // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void warn(const std::string &message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink) {
    g_sink(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

unsigned thread_count() {
  static const unsigned count = [] {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("PHOTON_ANGMOM_THREADS")) {
      char *end = nullptr;
      const long cap = std::strtol(env, &end, 10);
      if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
  }();
  return count;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)> &body,
                  std::size_t min_chunk) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(
      thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, chunk));
  for (auto &t : pool) t.join();
}

} // namespace angmom
