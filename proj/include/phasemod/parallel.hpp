#pragma once

#include <cstddef>
#include <functional>

namespace phasemod {

// Worker count used by parallel_for; 0 restores the hardware default.
void set_thread_count(std::size_t count);
std::size_t thread_count();

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
// so results written per index do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace phasemod
