#pragma once

#include <cstddef>
#include <functional>

namespace finiteshape {

// Worker cap used by the data-parallel loops. Zero means "available cores".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

// Runs body(begin, end) over disjoint chunks of [0, n). Bodies must only
// write to state owned by their chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace finiteshape
