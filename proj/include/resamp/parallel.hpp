#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace resamp {

// Runs fn(i) for i in [0, n).  jobs == 1 forces the serial path (the reference
// implementation used in tests); jobs == 0 takes the OpenMP default; any other
// value pins the thread count.  Callers write results into per-index slots and
// reduce serially afterwards, so output is identical for every jobs value.
template <typename Fn>
void parallel_for(long long n, int jobs, Fn&& fn) {
  if (jobs == 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
  if (jobs > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < n; ++i) fn(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) fn(i);
  }
#else
  for (long long i = 0; i < n; ++i) fn(i);
#endif
}

inline int hardware_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace resamp
