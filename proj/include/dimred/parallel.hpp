#pragma once

namespace dimred::parallel {

/// Worker cap for every OpenMP region in the library. Initialized from the
/// BENCH_THREADS environment variable, falling back to the OpenMP default.
int max_threads();

/// Overrides the cap for the rest of the process. Values < 1 reset to the
/// environment/OpenMP default.
void set_max_threads(int n);

/// Number of threads an OpenMP region should request right now: 1 when
/// already inside a parallel region, `max_threads()` otherwise.
int region_threads();

}  // namespace dimred::parallel
