#include "mtspec/jackknife.hpp"

#include <cmath>
#include <limits>

namespace mtspec {

double digamma(double x) {
  if (!(x > 0.0)) throw ParameterError("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  // ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6) + 1/(240x^8)
  double series = std::log(x) - 0.5 * inv;
  series -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
  return acc + series;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw ParameterError("trigamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  // 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9) + 5/(66x^11)
  double series = inv + 0.5 * inv2;
  series += inv * inv2 *
            (1.0 / 6.0 -
             inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
  return acc + series;
}

double jackknife_variance(const std::vector<double>& powers) {
  const std::size_t k = powers.size();
  if (k < 3) throw ParameterError("jackknife_variance: need K >= 3");
  double total = 0.0;
  for (double p : powers) {
    if (!(p > 0.0)) throw ParameterError("jackknife_variance: powers must be positive");
    total += p;
  }
  std::vector<double> logs(k);
  double mean_log = 0.0;
  for (std::size_t l = 0; l < k; ++l) {
    logs[l] = std::log((total - powers[l]) / static_cast<double>(k - 1));
    mean_log += logs[l];
  }
  mean_log /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : logs) ss += (v - mean_log) * (v - mean_log);
  return ss * static_cast<double>(k - 1) / static_cast<double>(k);
}

LogSpectrumStats log_estimates(const EigenSpectra& es) {
  return log_estimates_from_powers(es.grid, es.K, es.powers);
}

LogSpectrumStats log_estimates_from_powers(const FrequencyGrid& grid, int k,
                                           const std::vector<double>& powers) {
  const std::size_t m = grid.size;
  if (powers.size() != static_cast<std::size_t>(k) * m)
    throw ParameterError("log_estimates: power matrix must be K x M");
  LogSpectrumStats st;
  st.grid = grid;
  st.K = k;
  st.log_mean.assign(m, std::numeric_limits<double>::quiet_NaN());
  st.mean_log.assign(m, std::numeric_limits<double>::quiet_NaN());
  st.jack_var.assign(m, std::numeric_limits<double>::quiet_NaN());
  st.valid.assign(m, 1);

  std::vector<double> p(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < m; ++j) {
    bool ok = true;
    double sum = 0.0, sum_log = 0.0;
    for (int kk = 0; kk < k; ++kk) {
      const double v = powers[static_cast<std::size_t>(kk) * m + j];
      if (!(v > 0.0)) {
        ok = false;
        break;
      }
      p[static_cast<std::size_t>(kk)] = v;
      sum += v;
      sum_log += std::log(v);
    }
    if (!ok) {
      st.valid[j] = 0;
      continue;
    }
    st.log_mean[j] = std::log(sum / static_cast<double>(k));
    st.mean_log[j] = sum_log / static_cast<double>(k);
    st.jack_var[j] = k >= 3 ? jackknife_variance(p) : 0.0;
  }
  return st;
}

Chi2LogMoments chi2_log_moments(int k) {
  if (k < 3) throw ParameterError("chi2_log_moments: need K >= 3");
  const double kd = static_cast<double>(k);
  Chi2LogMoments mo;
  mo.K = k;
  mo.bias = std::log(kd) - digamma(kd);  // stored as a magnitude; the raw bias is downward
  mo.variance = trigamma(kd);
  mo.jack_expect = (kd - 1.0) * (kd - 1.0) / kd *
                   (2.0 / ((kd - 2.0) * (kd - 2.0)) +
                    0.5 * (trigamma((kd - 1.0) / 2.0) - trigamma((kd - 2.0) / 2.0)));
  mo.jack_asymptotic = (kd - 1.0) * (kd - 1.0) * (kd - 3.0) / (kd * std::pow(kd - 2.0, 3));
  mo.meanlog_variance = M_PI * M_PI / (6.0 * kd);
  return mo;
}

SpectralEstimate confidence_band(const SpectralEstimate& estimate, const LogSpectrumStats& stats,
                                 double n_sigma, BandKind kind) {
  if (estimate.grid != stats.grid)
    throw ParameterError("confidence_band: estimate and stats grids differ");
  if (!(n_sigma >= 0.0)) throw ParameterError("confidence_band: n_sigma must be >= 0");
  const Chi2LogMoments mo = chi2_log_moments(stats.K);
  const double gaussian_sigma = std::sqrt(mo.variance);

  SpectralEstimate out = estimate;
  const std::size_t m = estimate.grid.size;
  out.band_lo.assign(m, 0.0);
  out.band_hi.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (!stats.valid[j]) {
      out.band_lo[j] = out.band_hi[j] = estimate.values[j];
      continue;
    }
    const double center = stats.log_mean[j] + mo.bias;
    const double sigma =
        kind == BandKind::jackknife ? std::sqrt(stats.jack_var[j]) : gaussian_sigma;
    out.band_lo[j] = std::exp(center - n_sigma * sigma);
    out.band_hi[j] = std::exp(center + n_sigma * sigma);
  }
  return out;
}

}  // namespace mtspec
