#include "levcs/parallel.hpp"

#include <exception>
#include <vector>

#include <omp.h>

#include "levcs/error.hpp"

namespace levcs {

namespace {
int g_workers = 0;
}

void set_worker_count(int workers) {
  if (workers < 0) throw InvalidInput("worker count must be >= 0");
  g_workers = workers;
}

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace levcs
