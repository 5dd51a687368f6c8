#pragma once

#include <cstddef>
#include <functional>

namespace bayestomo {

// Worker threads used by the library's parallel loops. Defaults to the value
// of BAYESTOMO_THREADS, or 1 when unset. Results never depend on this value:
// work is always split into a fixed number of chunks and reduced in chunk
// order.
unsigned thread_count();
void set_thread_count(unsigned threads);

// Runs body(chunk) for chunk in [0, chunks) on up to thread_count() threads.
// Bodies must write only to chunk-private state.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace bayestomo
