#pragma once

#include <cstddef>
#include <vector>

#include "mtspec/adaptive.hpp"
#include "mtspec/tapers.hpp"
#include "mtspec/types.hpp"

namespace mtspec {

// (1/N) |sum_n x_n exp(-2 pi i f n)|^2 on the one-sided grid. dof = 2
// everywhere except 1 at f = 0 and Nyquist.
SpectralEstimate periodogram(const TimeSeries& x, std::size_t grid_size);

// |sum_n x_n nu_n exp(-2 pi i f n)|^2 / sum nu^2. For a unit-energy taper the
// divisor is 1; a raw rectangular taper reduces exactly to the periodogram.
SpectralEstimate tapered_periodogram(const TimeSeries& x, const Taper& taper,
                                     std::size_t grid_size);

// Unweighted moving average over +-halfwidth (cycles/sample); the window
// truncates at the grid edges. dof accumulates over Rayleigh-independent bins
// and is capped at 2*(2*W*N).
SpectralEstimate boxcar_smooth(const SpectralEstimate& est, double halfwidth);

// Per-taper transforms y^(k)(f) and powers for a Slepian family.
EigenSpectra eigencoefficients(const TimeSeries& x, const SlepianFamily& family,
                               std::size_t grid_size);

// S(f) = sum_k c_k(f) S^(k)(f), dof = 2 (sum c)^2 / sum c^2. Weights are
// K x M row-major, nonnegative, with per-frequency sums in (0, 1.05].
SpectralEstimate combine(const EigenSpectra& es, const std::vector<double>& weights);

// Eq.-style uniform weighting c_k = 1/K.
SpectralEstimate uniform_multitaper(const EigenSpectra& es);

// Multitaper combined under the given weighting, then boxcar smoothed.
// A kernel below one grid spacing leaves the multitaper estimate unchanged.
SpectralEstimate hybrid_estimate(const TimeSeries& x, const SlepianFamily& family,
                                 const WeightingScheme& scheme, double kernel_halfwidth,
                                 std::size_t grid_size);

// Average of tapered periodograms over (possibly overlapping) segments.
// dof = 2 * segment count, halved at f = 0 and Nyquist.
SpectralEstimate welch_estimate(const TimeSeries& x, std::size_t segment_len,
                                double overlap_fraction, const Taper& taper,
                                std::size_t grid_size);

// Mean of the estimate over the full two-sided grid (Parseval checks).
double two_sided_mean(const SpectralEstimate& est);

}  // namespace mtspec
