#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secbc {

/// Caps the worker count for all parallel kernels; 0 restores the default.
inline void set_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) {
    omp_set_num_threads(jobs);
  } else {
    omp_set_num_threads(omp_get_num_procs());
  }
#else
  (void)jobs;
#endif
}

inline int max_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs body(0..chunks-1) across workers. Chunk boundaries are fixed by the
/// caller, so results never depend on the worker count; each chunk writes to
/// its own slot and the caller merges in chunk order.
template <typename Body>
void parallel_for_chunks(std::size_t chunks, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
    body(static_cast<std::size_t>(c));
  }
#else
  for (std::size_t c = 0; c < chunks; ++c) body(c);
#endif
}

}  // namespace secbc
