#include "pslr/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <thread>

namespace pslr {

void set_num_threads(int threads) { omp_set_num_threads(std::max(threads, 1)); }

int num_threads() { return omp_get_max_threads(); }

int hardware_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace pslr
