#include "gsdde/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace gsdde {

std::optional<int> apply_thread_cap_from_env() {
  const char* raw = std::getenv("GSDDE_THREADS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1) return std::nullopt;
  set_thread_cap(static_cast<int>(value));
  return static_cast<int>(value);
}

void set_thread_cap(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace gsdde
