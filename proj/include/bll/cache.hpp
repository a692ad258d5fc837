#pragma once

#include <filesystem>

#include "bll/hamiltonian.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

// Binary layout, little-endian:
//   "BLIS" | u8 version=1 | u8 trace mode (0 none, 1 onesided2, 2 variational)
//   | u32 n | u32 N | u64 K | u64 dim | u64 boundary | u64 potential hash
//   | f64 shift | f64 values[K] | f64 residuals[K] | f64 vectors[dim*K]
//   | f64 traces[boundary*K] (only when a trace mode is set) | f64 potential[dim]
// Matrices are stored column by column.
void save_cache(const std::filesystem::path& path, const SpectralData& sd);
SpectralData load_cache(const std::filesystem::path& path);
// Also rejects a cache whose potential hash differs from the running operator.
SpectralData load_cache(const std::filesystem::path& path, const DiscreteOperator& expected);

}  // namespace bll
