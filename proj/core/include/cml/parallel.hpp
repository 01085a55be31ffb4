#pragma once

#include <cstdint>
#include <functional>

namespace cml::par {

/// Worker count: the CML_THREADS environment variable when set (clamped to
/// [1, 256]), otherwise the hardware concurrency. Read on every call, not
/// cached, so tests can toggle it.
int thread_count();

/// Runs fn(begin, end, chunk_index) over [0, n) split into fixed-size chunks.
/// Chunk boundaries depend only on chunk_size, never on the worker count, so
/// callers that write into chunk-indexed slots and reduce in chunk order get
/// results that are byte-identical for any CML_THREADS value.
void parallel_chunks(
    std::int64_t n, std::int64_t chunk_size,
    const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

}  // namespace cml::par
