#pragma once

// Index-parallel loops over independent work items. Serial and Parallel give
// identical results whenever the body only writes to its own slot.

#include <cstddef>
#include <functional>

namespace levcs {

enum class Execution { Serial, Parallel };

/// 0 means the OpenMP default.
void set_worker_count(int workers);
int worker_count();

/// Runs body(i) for i in [0, n). The exception thrown by the lowest failing
/// index is rethrown after all items finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec);

}  // namespace levcs
