#pragma once

#include <cstddef>
#include <functional>

namespace turan
{
//! Worker count: \p requested if nonzero, else hardware concurrency, capped
//! by the TURAN_THREADS environment variable.
unsigned resolve_threads(unsigned requested = 0);

//! Run body(i) for i in [0, count) on up to \p threads workers.
void parallel_for(std::size_t count, unsigned threads,
                  std::function<void(std::size_t)> const& body);

}  // namespace turan
