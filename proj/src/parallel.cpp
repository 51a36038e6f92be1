#include "dimred/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace dimred::parallel {

namespace {

int env_default() {
    if (const char* env = std::getenv("BENCH_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
    return omp_get_max_threads();
}

std::atomic<int>& cap() {
    static std::atomic<int> value{env_default()};
    return value;
}

}  // namespace

int max_threads() { return cap().load(); }

void set_max_threads(int n) { cap().store(n >= 1 ? n : env_default()); }

int region_threads() { return omp_in_parallel() ? 1 : max_threads(); }

}  // namespace dimred::parallel
