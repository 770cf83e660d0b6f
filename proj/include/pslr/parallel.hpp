#pragma once

namespace pslr {

/// Worker threads used by block factorizations, block solves and matvecs.
/// Results never depend on this value.
void set_num_threads(int threads);
int num_threads();
int hardware_threads();

}  // namespace pslr
