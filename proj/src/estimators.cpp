#include "mtspec/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "mtspec/fft.hpp"

namespace mtspec {

namespace {

SpectralEstimate raw_tapered(const TimeSeries& x, const std::vector<double>& window,
                             double power_divisor, std::size_t grid_size) {
  const std::size_t n = x.size();
  const std::size_t m = effective_grid_size(n, grid_size);
  std::vector<double> xt(n);
  for (std::size_t i = 0; i < n; ++i) xt[i] = x.samples[i] * window[i];
  const auto y = fft::dtft_onesided(xt, m);

  SpectralEstimate est;
  est.grid = FrequencyGrid(m);
  est.values.resize(m);
  est.dof.assign(m, 2.0);
  est.dof.front() = 1.0;
  est.dof.back() = 1.0;
  for (std::size_t j = 0; j < m; ++j) est.values[j] = std::norm(y[j]) / power_divisor;
  est.method.n_samples = n;
  return est;
}

}  // namespace

SpectralEstimate periodogram(const TimeSeries& x, std::size_t grid_size) {
  x.validate();
  SpectralEstimate est = raw_tapered(x, std::vector<double>(x.size(), 1.0),
                                     static_cast<double>(x.size()), grid_size);
  est.method.estimator = "periodogram";
  est.method.taper = "rectangular";
  return est;
}

SpectralEstimate tapered_periodogram(const TimeSeries& x, const Taper& taper,
                                     std::size_t grid_size) {
  x.validate();
  if (taper.size() != x.size())
    throw ParameterError("tapered_periodogram: taper length does not match series length");
  SpectralEstimate est = raw_tapered(x, taper.values, taper.energy(), grid_size);
  est.method.estimator = "tapered";
  return est;
}

SpectralEstimate boxcar_smooth(const SpectralEstimate& est, double halfwidth) {
  if (!(halfwidth > 0.0) || !(halfwidth < 0.25))
    throw ParameterError("boxcar_smooth: halfwidth must lie in (0, 1/4)");
  const std::size_t m = est.grid.size;
  const double df = est.grid.spacing();
  const std::size_t radius = static_cast<std::size_t>(std::floor(halfwidth / df + 1e-12));
  if (radius < 1) return est;  // window narrower than one grid spacing

  SpectralEstimate out = est;
  std::vector<double> csum(m + 1, 0.0), cdof(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    csum[j + 1] = csum[j] + est.values[j];
    cdof[j + 1] = cdof[j] + est.dof[j];
  }
  const double n = static_cast<double>(est.method.n_samples);
  const double cap = 2.0 * (2.0 * halfwidth * n);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t a = j >= radius ? j - radius : 0;
    const std::size_t b = std::min(j + radius, m - 1);
    const double count = static_cast<double>(b - a + 1);
    out.values[j] = (csum[b + 1] - csum[a]) / count;
    if (est.method.n_samples == 0 || std::isinf(est.dof[j])) continue;  // model spectra
    // Bins within a Rayleigh width 1/N are correlated: scale the grid-bin dof
    // sum down to independent-bin units, cap at 2*(2WN), never drop below the
    // input dof.
    const double indep = (cdof[b + 1] - cdof[a]) * df * n;
    out.dof[j] = std::max(est.dof[j], std::min(indep, cap));
  }
  out.method.kernel_halfwidth += halfwidth;
  if (out.method.estimator == "periodogram" || out.method.estimator == "tapered")
    out.method.estimator = "smoothed";
  return out;
}

EigenSpectra eigencoefficients(const TimeSeries& x, const SlepianFamily& family,
                               std::size_t grid_size) {
  x.validate();
  if (family.N != x.size())
    throw ParameterError("eigencoefficients: family length does not match series length");
  const std::size_t n = x.size();
  const std::size_t m = effective_grid_size(n, grid_size);

  EigenSpectra es;
  es.grid = FrequencyGrid(m);
  es.K = family.K;
  es.eigenvalues = family.eigenvalues;
  es.coeffs.resize(static_cast<std::size_t>(family.K) * m);
  es.powers.resize(static_cast<std::size_t>(family.K) * m);
  std::vector<double> xt(n);
  for (int k = 0; k < family.K; ++k) {
    for (std::size_t i = 0; i < n; ++i) xt[i] = x.samples[i] * family.tapers[k].values[i];
    const auto y = fft::dtft_onesided(xt, m);
    for (std::size_t j = 0; j < m; ++j) {
      es.coeffs[es.index(k, j)] = y[j];
      es.powers[es.index(k, j)] = std::norm(y[j]);
    }
  }
  return es;
}

SpectralEstimate combine(const EigenSpectra& es, const std::vector<double>& weights) {
  const std::size_t m = es.grid.size;
  const std::size_t k = static_cast<std::size_t>(es.K);
  if (weights.size() != k * m) throw ParameterError("combine: weight matrix must be K x M");

  SpectralEstimate out;
  out.grid = es.grid;
  out.values.assign(m, 0.0);
  out.dof.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0, csum = 0.0, csq = 0.0;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double c = weights[kk * m + j];
      if (c < 0.0) throw ParameterError("combine: negative weight at taper " + std::to_string(kk) +
                                        ", bin " + std::to_string(j));
      s += c * es.powers[kk * m + j];
      csum += c;
      csq += c * c;
    }
    if (!(csum > 0.0) || csum > 1.05)
      throw ParameterError("combine: per-frequency weight sum must lie in (0, 1.05] at bin " +
                           std::to_string(j));
    out.values[j] = s;
    out.dof[j] = 2.0 * csum * csum / csq;
  }
  out.method.estimator = "multitaper";
  out.method.taper = "slepian";
  out.method.taper_count = es.K;
  return out;
}

SpectralEstimate uniform_multitaper(const EigenSpectra& es) {
  const std::size_t m = es.grid.size;
  std::vector<double> w(static_cast<std::size_t>(es.K) * m, 1.0 / static_cast<double>(es.K));
  SpectralEstimate out = combine(es, w);
  out.method.weighting = "uniform";
  return out;
}

SpectralEstimate hybrid_estimate(const TimeSeries& x, const SlepianFamily& family,
                                 const WeightingScheme& scheme, double kernel_halfwidth,
                                 std::size_t grid_size) {
  WeightingScheme sc = scheme;
  if (sc.kind != WeightingKind::uniform && sc.sigma2 <= 0.0) sc.sigma2 = x.mean_power();
  const EigenSpectra es = eigencoefficients(x, family, grid_size);
  SpectralEstimate est = adaptive_combine(es, sc).second;
  est.method.n_samples = x.size();
  est.method.time_bandwidth = family.time_bandwidth;
  if (kernel_halfwidth >= est.grid.spacing()) est = boxcar_smooth(est, kernel_halfwidth);
  est.method.estimator = "hybrid";
  return est;
}

SpectralEstimate welch_estimate(const TimeSeries& x, std::size_t segment_len,
                                double overlap_fraction, const Taper& taper,
                                std::size_t grid_size) {
  x.validate();
  if (segment_len > x.size())
    throw ParameterError("welch_estimate: fewer than one full segment");
  if (overlap_fraction < 0.0 || overlap_fraction > 0.9)
    throw ParameterError("welch_estimate: overlap_fraction must lie in [0, 0.9]");
  if (taper.size() != segment_len)
    throw ParameterError("welch_estimate: taper length does not match segment length");

  const double step = static_cast<double>(segment_len) * (1.0 - overlap_fraction);
  const std::size_t count =
      static_cast<std::size_t>(std::floor(static_cast<double>(x.size() - segment_len) / step)) + 1;

  SpectralEstimate acc;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = static_cast<std::size_t>(std::llround(static_cast<double>(i) * step));
    TimeSeries seg(std::vector<double>(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                                       x.samples.begin() + static_cast<std::ptrdiff_t>(start + segment_len)),
                   x.dt);
    SpectralEstimate p = tapered_periodogram(seg, taper, grid_size);
    if (i == 0) {
      acc = std::move(p);
    } else {
      for (std::size_t j = 0; j < acc.values.size(); ++j) acc.values[j] += p.values[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (double& v : acc.values) v *= inv;
  acc.dof.assign(acc.grid.size, 2.0 * static_cast<double>(count));
  acc.dof.front() = static_cast<double>(count);
  acc.dof.back() = static_cast<double>(count);
  acc.method.estimator = "welch";
  acc.method.taper_count = static_cast<int>(count);
  acc.method.n_samples = segment_len;
  return acc;
}

double two_sided_mean(const SpectralEstimate& est) {
  const std::size_t m = est.grid.size;
  double acc = est.values.front() + est.values.back();
  for (std::size_t j = 1; j + 1 < m; ++j) acc += 2.0 * est.values[j];
  return acc / static_cast<double>(est.grid.two_sided_size());
}

}  // namespace mtspec
