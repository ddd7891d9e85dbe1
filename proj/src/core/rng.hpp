#pragma once
// Counter-based Gaussian draws: every standard normal is a pure function of
// (master_seed, stream_tag, path, step, mode). This makes paths reproducible
// bit-exactly across runs and worker partitions, lets coupled refinements
// re-address the same underlying increments, and needs no generator state.

#include <cstdint>

namespace bnspde {

// Address-space tags. Interior and boundary Wiener streams are disjoint by
// construction; the auxiliary tag serves seeded initial data and diagnostics.
inline constexpr uint32_t kStreamInterior = 1;
inline constexpr uint32_t kStreamBoundary = 2;
inline constexpr uint32_t kStreamAux = 3;

// 64-bit avalanche finalizer (SplitMix64 output function).
uint64_t mix64(uint64_t x);

// Uniform draw in the open interval (0,1) for the given address.
double uniform_draw(uint64_t master_seed, uint32_t stream_tag, uint64_t path, uint64_t step,
                    uint64_t mode);

// Standard normal draw for the given address (inverse-CDF of the uniform).
double normal_draw(uint64_t master_seed, uint32_t stream_tag, uint64_t path, uint64_t step,
                   uint64_t mode);

// Inverse of the standard normal CDF, accurate to ~1e-15 over (0,1)
// (rational approximation in three regimes).
double inverse_normal_cdf(double p);

} // namespace bnspde
