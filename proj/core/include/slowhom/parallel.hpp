#pragma once

#include <functional>

namespace slowhom {

// Worker count: SLOWHOM_THREADS if set, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n); each index is handled by exactly one worker,
// so results written per index are deterministic.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace slowhom
