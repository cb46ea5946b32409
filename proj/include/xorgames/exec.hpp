#pragma once

namespace xorgames {

// Execution policy for the data-parallel kernels (SDP restarts, rounding
// trials, game simulation partitions, rigidity pair loops). The serial path
// is the reference implementation; results are identical by construction
// because every work unit derives its randomness from its own index and
// aggregation runs in fixed index order.
enum class Exec {
    serial,
    openmp,
};

}  // namespace xorgames
