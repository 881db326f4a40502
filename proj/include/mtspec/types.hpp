#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mtspec/errors.hpp"

namespace mtspec {

// Real-valued, uniformly sampled record. All internal math treats the sample
// interval as unity; dt only matters when frequencies cross an I/O boundary.
struct TimeSeries {
  std::vector<double> samples;
  double dt = 1.0;

  TimeSeries() = default;
  TimeSeries(std::vector<double> s, double dt_ = 1.0) : samples(std::move(s)), dt(dt_) {
    validate();
  }

  std::size_t size() const { return samples.size(); }

  // Total sample power (1/N) sum x_n^2, the plug-in sigma^2 used by the
  // adaptive weightings.
  double mean_power() const {
    double acc = 0.0;
    for (double v : samples) acc += v * v;
    return acc / static_cast<double>(samples.size());
  }

  void validate() const {
    if (samples.size() < 8) throw ParameterError("TimeSeries: need at least 8 samples");
    if (!(dt > 0.0)) throw ParameterError("TimeSeries: dt must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!std::isfinite(samples[i]))
        throw ParameterError("TimeSeries: non-finite sample at index " + std::to_string(i));
    }
  }
};

// One-sided uniform frequency grid over [0, 1/2] in cycles/sample.
// The grid has `size` points with exact spacing 1/(2*(size-1)), i.e. it is the
// nonnegative half of a two-sided DFT grid of length 2*(size-1).
struct FrequencyGrid {
  std::size_t size = 0;

  FrequencyGrid() = default;
  explicit FrequencyGrid(std::size_t m) : size(m) {
    if (m < 2) throw ParameterError("FrequencyGrid: need at least 2 points");
  }

  std::size_t two_sided_size() const { return 2 * (size - 1); }
  double spacing() const { return 1.0 / static_cast<double>(two_sided_size()); }
  double frequency(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  std::vector<double> frequencies() const {
    std::vector<double> f(size);
    for (std::size_t j = 0; j < size; ++j) f[j] = frequency(j);
    return f;
  }

  bool operator==(const FrequencyGrid& o) const { return size == o.size; }
  bool operator!=(const FrequencyGrid& o) const { return size != o.size; }
};

// Grid sizing rule shared by every estimator: zero-pad to at least 4N so that
// kernel windows span many bins and all methods land on alignable grids.
inline std::size_t effective_grid_size(std::size_t n_samples, std::size_t requested) {
  if (requested < n_samples)
    throw ParameterError("grid_size must be >= the number of samples");
  return std::max<std::size_t>(4 * n_samples, requested);
}

// What produced a SpectralEstimate. Free-form but machine-readable enough for
// manifests and report rows.
struct MethodDescriptor {
  std::string estimator;       // periodogram | tapered | smoothed | multitaper | hybrid | welch | model
  std::string taper;           // rectangular | tukey | slepian | (empty)
  std::string weighting;       // uniform | seqdesel | minloss | wiener | (empty)
  double time_bandwidth = 0.0; // Slepian W-bar, when applicable
  int taper_count = 0;         // K, when applicable
  double kernel_halfwidth = 0.0;  // boxcar halfwidth in cycles/sample, 0 if unsmoothed
  std::size_t n_samples = 0;   // length of the record (segment) behind the estimate
  std::string note;            // convergence flags etc.

  std::string label() const {
    std::string s = estimator;
    if (!taper.empty()) s += "/" + taper;
    if (!weighting.empty()) s += "/" + weighting;
    return s;
  }
};

// Spectral density estimate on a one-sided grid, with per-frequency effective
// degrees of freedom and an optional confidence band.
struct SpectralEstimate {
  FrequencyGrid grid;
  std::vector<double> values;
  std::vector<double> dof;
  MethodDescriptor method;
  std::vector<double> band_lo;  // empty when no band attached
  std::vector<double> band_hi;

  bool has_band() const { return !band_lo.empty(); }

  void validate() const {
    if (values.size() != grid.size || dof.size() != grid.size)
      throw ParameterError("SpectralEstimate: size mismatch");
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!(values[j] >= 0.0) || !std::isfinite(values[j]))
        throw NumericError("SpectralEstimate: negative or non-finite value at bin " +
                           std::to_string(j));
    }
  }
};

// Per-taper complex transforms y^(k)(f) and their powers |y^(k)(f)|^2.
// Row-major K x M storage.
struct EigenSpectra {
  FrequencyGrid grid;
  int K = 0;
  std::vector<std::complex<double>> coeffs;  // K * M
  std::vector<double> powers;                // K * M
  std::vector<double> eigenvalues;           // K concentrations, copied from the family

  std::size_t index(int k, std::size_t j) const { return static_cast<std::size_t>(k) * grid.size + j; }
  std::complex<double> coeff(int k, std::size_t j) const { return coeffs[index(k, j)]; }
  double power(int k, std::size_t j) const { return powers[index(k, j)]; }
};

inline constexpr double kInfiniteDof = std::numeric_limits<double>::infinity();

}  // namespace mtspec
