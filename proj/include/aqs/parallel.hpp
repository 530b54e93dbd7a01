#pragma once

#include <cstdint>
#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace aqs {

// Number of threads the OpenMP runtime would use; 1 when built without it.
inline int hardware_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs fn(i) for i in [0, count). threads == 1 takes the plain serial loop,
// which is the reference path the tests compare against; threads <= 0
// resolves to hardware_threads(). Every index must write only to its own
// output slot, so results are identical for any thread count.
template <class F>
void parallel_for(std::int64_t count, int threads, F&& fn) {
  if (threads <= 0) threads = hardware_threads();
  if (threads == 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
#if defined(_OPENMP)
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for (std::int64_t i = 0; i < count; ++i) fn(i);
#endif
}

}  // namespace aqs
