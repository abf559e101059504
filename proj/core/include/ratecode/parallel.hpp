#ifndef RATECODE_PARALLEL_HPP_
#define RATECODE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace ratecode {

/// Number of worker threads internal loops may use. Controlled by the
/// RATECODE_THREADS environment variable: unset or 1 means sequential,
/// 0 means hardware concurrency, anything else is taken literally.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, count). Work is split into contiguous chunks, one
/// per worker. Each index is processed exactly once and writes only its own
/// output slot, so results are identical to a sequential loop regardless of
/// the thread budget.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ratecode

#endif  // RATECODE_PARALLEL_HPP_
