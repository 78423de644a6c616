#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace elsgd {

/// The library's named generator. All randomized results record the seed.
using Rng = std::mt19937_64;

/// Independent, reproducible stream for (seed, stream id).
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Worker count from ELS_GD_THREADS, else hardware concurrency (at least 1).
unsigned worker_count();

/// Fixed partition of [0, total) into blocks of `block` indices. Results
/// keyed by block index depend only on (total, block), never on how many
/// workers ran them.
inline constexpr std::size_t kSampleBlock = 1024;

/// Runs body(block_index, begin, end) for every block, spreading blocks over
/// `workers` threads (0 = worker_count()). body must only write to
/// per-block storage.
void for_each_block(std::size_t total, std::size_t block,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                    unsigned workers = 0);

}  // namespace elsgd
