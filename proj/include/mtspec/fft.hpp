#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mtspec::fft {

// Smallest 2^a 3^b 5^c >= n; FFTW handles these lengths efficiently.
std::size_t next_fast_len(std::size_t n);

// Unnormalized real-to-complex DFT of length(in) == n; returns n/2+1 bins.
std::vector<std::complex<double>> forward_r2c(const std::vector<double>& in);

// Unnormalized inverse of forward_r2c: takes n/2+1 Hermitian bins, returns n
// real samples (scaled by n relative to the analytic inverse, as in FFTW).
std::vector<double> inverse_c2r(const std::vector<std::complex<double>>& half, std::size_t n);

// DTFT of x (length N, zero-padded) with the symmetric index convention
// y(f) = sum_n x_n exp(-2 pi i f (n - (N-1)/2)), evaluated on the one-sided
// grid f_j = j / (2 (m-1)), j = 0..m-1. Requires 2*(m-1) >= N.
std::vector<std::complex<double>> dtft_onesided(const std::vector<double>& x, std::size_t m);

// Linear autocorrelation r(tau) = sum_n x_n x_{n+tau}, tau = 0..N-1.
std::vector<double> autocorrelation(const std::vector<double>& x);

}  // namespace mtspec::fft
