#pragma once

#include <optional>

namespace gsdde {

/// Which implementation of a data-parallel kernel to run. Serial is the
/// reference; OpenMP must produce bit-identical results.
enum class Backend { Serial, OpenMP };

/// Reads GSDDE_THREADS and, if set to a positive integer, caps the OpenMP
/// team size. Returns the parsed value.
std::optional<int> apply_thread_cap_from_env();

void set_thread_cap(int threads);
int max_threads();

}  // namespace gsdde
