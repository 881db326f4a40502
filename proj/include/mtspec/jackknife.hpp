#pragma once

#include <cstdint>
#include <vector>

#include "mtspec/adaptive.hpp"
#include "mtspec/types.hpp"

namespace mtspec {

// Digamma / trigamma via upward recurrence into the asymptotic regime;
// accurate to better than 1e-10 for positive arguments.
double digamma(double x);
double trigamma(double x);

// Per-frequency log-spectrum point estimates and delete-one jackknife
// variance over K eigenspectra.
struct LogSpectrumStats {
  FrequencyGrid grid;
  int K = 0;
  std::vector<double> log_mean;   // ln of the mean power
  std::vector<double> mean_log;   // mean of the log powers
  std::vector<double> jack_var;   // delete-one jackknife variance of ln S
  std::vector<std::uint8_t> valid;  // 0 where any power was nonpositive
};

LogSpectrumStats log_estimates(const EigenSpectra& es);

// Same statistics from an arbitrary K x M power matrix.
LogSpectrumStats log_estimates_from_powers(const FrequencyGrid& grid, int k,
                                           const std::vector<double>& powers);

// Delete-one jackknife variance of ln S from K powers at one frequency.
double jackknife_variance(const std::vector<double>& powers);

// Expensive variant: each delete-one estimate re-runs the nonlinear adaptive
// weighting on the K-1 remaining eigenspectra, propagating its effects into
// the variance. Returns the per-frequency variance of ln S.
std::vector<double> jackknife_adaptive_variance(const EigenSpectra& es,
                                                const WeightingScheme& scheme);

// Closed-form chi^2 moments of the log-spectral estimates for K tapers.
struct Chi2LogMoments {
  int K = 0;
  double bias = 0.0;             // |psi(K) - ln K|, magnitude of the log-mean bias
  double variance = 0.0;         // psi'(K), variance of ln(mean)
  double jack_expect = 0.0;      // expectation of the jackknife variance estimate
  double jack_asymptotic = 0.0;  // its large-K form (zero at K = 3)
  double meanlog_variance = 0.0; // pi^2 / (6K), variance of the mean of logs
};

Chi2LogMoments chi2_log_moments(int k);

enum class BandKind { jackknife, gaussian };

// Attaches exp(log_mean + bias +- n_sigma * sigma) to the estimate, with
// sigma the jackknife standard deviation or the Gaussian-theory sqrt(psi'(K)).
SpectralEstimate confidence_band(const SpectralEstimate& estimate, const LogSpectrumStats& stats,
                                 double n_sigma, BandKind kind = BandKind::jackknife);

}  // namespace mtspec
