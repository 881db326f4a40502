#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mtspec/types.hpp"

namespace mtspec {

enum class TaperNorm { unit_energy, raw };

// Data window nu_n, n = 0..N-1 in storage, representing the symmetric index
// range -[N/2]..[N/2].
struct Taper {
  std::vector<double> values;
  TaperNorm norm_kind = TaperNorm::raw;

  std::size_t size() const { return values.size(); }

  double energy() const {
    double e = 0.0;
    for (double v : values) e += v * v;
    return e;
  }
};

// All-ones (raw) or 1/sqrt(N) (unit-energy) window.
Taper rectangular_taper(std::size_t n, TaperNorm norm = TaperNorm::raw);

// K orthonormal Slepian tapers for time-bandwidth product W-bar = W*N, with
// their concentration eigenvalues lambda_k in descending order.
struct SlepianFamily {
  std::size_t N = 0;
  double time_bandwidth = 0.0;          // W-bar (dimensionless)
  int K = 0;
  std::vector<Taper> tapers;            // K unit-energy tapers
  std::vector<double> eigenvalues;      // lambda_0 > ... > lambda_{K-1}

  double bandwidth() const { return time_bandwidth / static_cast<double>(N); }  // cycles/sample
};

// Default taper count for a given time-bandwidth product.
inline int default_taper_count(double time_bandwidth) {
  return static_cast<int>(std::lround(2.0 * time_bandwidth));
}

// Computes the first K Slepian tapers by diagonalizing the tridiagonal matrix
// that commutes with the concentration matrix; the concentrations lambda_k are
// then evaluated as quadratic forms against the concentration matrix itself.
SlepianFamily build_slepian_family(std::size_t n, double time_bandwidth, int k);

// nu^T A(N,W) nu with A_mn = sin(2 pi W (n-m)) / (pi (n-m)), A_nn = 2W.
// Requires a unit-energy taper and 0 < W < 1/2; the result lies in (0, 1].
double concentration_eigenvalue(const Taper& taper, double bandwidth);

// Tukey split-cosine taper parameterized by alpha*N directly. Stored raw;
// power estimates divide by sum nu^2.
Taper build_tukey_taper(std::size_t n, double alpha_n);

// V(f) on a uniform two-sided grid in [-1/2, 1/2).
struct SpectralWindow {
  std::vector<double> frequencies;
  std::vector<std::complex<double>> values;
};

// Discrete-time Fourier transform of the taper with the symmetric index
// convention, zero-padded onto grid_size frequencies.
SpectralWindow spectral_window(const Taper& taper, std::size_t grid_size);

}  // namespace mtspec
