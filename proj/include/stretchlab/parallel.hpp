#pragma once

#include <cstddef>
#include <functional>

namespace stretchlab {

// Worker count for per-cell loops. Results never depend on it: loops write
// disjoint per-index outputs and every reduction runs sequentially afterwards.
void set_threads(int n);
int threads();

void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace stretchlab
