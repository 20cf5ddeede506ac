#pragma once

#include <cstdint>
#include <functional>

namespace trisys {

// Worker count for index-range sweeps: TF_THREADS env var if set, else
// hardware concurrency. Always >= 1.
int worker_count();

// Splits [0, total) into contiguous chunks, one per worker, and runs
// fn(begin, end, chunk_index) on each. Chunk boundaries depend only on
// (total, worker_count()), so per-chunk results can be merged in chunk order
// for output that is bit-identical to a sequential sweep.
void parallel_chunks(int64_t total,
                     const std::function<void(int64_t, int64_t, int)>& fn);

}  // namespace trisys
