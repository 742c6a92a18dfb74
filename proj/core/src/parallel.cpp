#include "nas/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace nas {
namespace {

std::atomic<std::size_t> g_jobs{0};

std::size_t env_jobs() {
  if (const char* v = std::getenv("NAS_JOBS")) {
    try {
      const long n = std::stol(v);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace

std::size_t default_jobs() {
  const std::size_t j = g_jobs.load();
  return j ? j : env_jobs();
}

void set_default_jobs(std::size_t jobs) { g_jobs.store(jobs); }

}  // namespace nas
