#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtspec/types.hpp"

namespace mtspec {

// Counter-style generator (splitmix64) with a hand-rolled Box-Muller
// transform, so realizations are identical across platforms and standard
// library versions. The algorithm name is pinned into every run manifest.
inline constexpr const char* kRngVersion = "splitmix64-boxmuller-1";

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1].
  double next_uniform() {
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_normal();

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class ModelKind { white, ar, tabulated, tftr_like };

struct SpectralPeak {
  double frequency = 0.0;  // cycles/sample
  double width = 0.0;      // Gaussian sigma
  double height = 0.0;
};

// Analytically known two-sided spectral density, evaluable on [0, 1/2].
struct SpectrumModel {
  ModelKind kind = ModelKind::white;

  double white_sigma2 = 1.0;

  std::vector<double> ar_coeffs;        // a_1..a_p
  double ar_innovation_variance = 1.0;

  std::vector<double> tab_freqs;        // ascending, within [0, 1/2]
  std::vector<double> tab_values;       // strictly positive

  // tftr_like: exponential log-linear decay over four decades to a flat
  // floor, a narrow partially-coherent peak and a broad secondary peak.
  double floor_level = 3e-4;
  double decay_rate = 18.420680743952367;  // 8 ln 10: four decades over [0, 1/2]
  double decay_base = 1.0;
  std::vector<SpectralPeak> peaks{{0.20, 0.010, 3.0}, {0.11, 0.025, 1.0}};

  static SpectrumModel white(double sigma2 = 1.0);
  static SpectrumModel autoregressive(std::vector<double> coeffs, double innovation_variance);
  static SpectrumModel tabulated(std::vector<double> freqs, std::vector<double> values);
  static SpectrumModel tftr_like();

  double evaluate(double f) const;
  std::string name() const;
};

// Closed-form evaluation on the grid; dof carries the infinite marker.
SpectralEstimate evaluate_spectrum(const SpectrumModel& model, const FrequencyGrid& grid);

// Gaussian realization: AR models by direct recursion with burn-in, all
// others by circulant frequency-domain coloring. Deterministic in
// (model, n, seed).
TimeSeries generate(const SpectrumModel& model, std::size_t n, std::uint64_t seed);

}  // namespace mtspec
