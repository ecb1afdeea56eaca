#ifndef FEDGAME_PARALLEL_HPP
#define FEDGAME_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fedgame {

/// Caps internal parallelism. n <= 0 restores the default (hardware cores).
void set_thread_count(int n);
int thread_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) on each. Callers write into pre-sized, index-addressed
/// storage so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fedgame

#endif  // FEDGAME_PARALLEL_HPP
