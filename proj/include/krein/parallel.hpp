#pragma once

#include <cstddef>
#include <functional>

namespace krein {

enum class Execution { Serial, Parallel };

// Runs body(i) for i in [0, n). The parallel variant distributes indices over
// OpenMP threads; the serial variant is the reference used in tests. Bodies
// write to disjoint, pre-sized slots, so output order never depends on the
// schedule. The first exception thrown by any body is rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    Execution exec = Execution::Parallel);

int max_threads();

}  // namespace krein
