#include "mtspec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "mtspec/fft.hpp"

namespace mtspec {

double Rng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

SpectrumModel SpectrumModel::white(double sigma2) {
  if (!(sigma2 > 0.0)) throw ParameterError("white model: sigma2 must be positive");
  SpectrumModel m;
  m.kind = ModelKind::white;
  m.white_sigma2 = sigma2;
  return m;
}

SpectrumModel SpectrumModel::autoregressive(std::vector<double> coeffs,
                                            double innovation_variance) {
  if (coeffs.empty()) throw ParameterError("ar model: need at least one coefficient");
  if (!(innovation_variance > 0.0))
    throw ParameterError("ar model: innovation variance must be positive");
  SpectrumModel m;
  m.kind = ModelKind::ar;
  m.ar_coeffs = std::move(coeffs);
  m.ar_innovation_variance = innovation_variance;
  return m;
}

SpectrumModel SpectrumModel::tabulated(std::vector<double> freqs, std::vector<double> values) {
  if (freqs.size() != values.size() || freqs.size() < 2)
    throw ParameterError("tabulated model: need two or more (frequency, value) pairs");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(values[i] > 0.0)) throw ParameterError("tabulated model: values must be positive");
    if (i > 0 && !(freqs[i] > freqs[i - 1]))
      throw ParameterError("tabulated model: frequencies must be strictly ascending");
  }
  SpectrumModel m;
  m.kind = ModelKind::tabulated;
  m.tab_freqs = std::move(freqs);
  m.tab_values = std::move(values);
  return m;
}

SpectrumModel SpectrumModel::tftr_like() {
  SpectrumModel m;
  m.kind = ModelKind::tftr_like;
  return m;
}

double SpectrumModel::evaluate(double f) const {
  switch (kind) {
    case ModelKind::white:
      return white_sigma2;
    case ModelKind::ar: {
      std::complex<double> h(1.0, 0.0);
      for (std::size_t j = 0; j < ar_coeffs.size(); ++j) {
        const double w = -2.0 * M_PI * f * static_cast<double>(j + 1);
        h -= ar_coeffs[j] * std::complex<double>(std::cos(w), std::sin(w));
      }
      return ar_innovation_variance / std::norm(h);
    }
    case ModelKind::tabulated: {
      // Log-linear interpolation, clamped at the table ends.
      if (f <= tab_freqs.front()) return tab_values.front();
      if (f >= tab_freqs.back()) return tab_values.back();
      const auto it = std::upper_bound(tab_freqs.begin(), tab_freqs.end(), f);
      const std::size_t i = static_cast<std::size_t>(it - tab_freqs.begin());
      const double t = (f - tab_freqs[i - 1]) / (tab_freqs[i] - tab_freqs[i - 1]);
      return std::exp((1.0 - t) * std::log(tab_values[i - 1]) + t * std::log(tab_values[i]));
    }
    case ModelKind::tftr_like: {
      double s = floor_level + decay_base * std::exp(-decay_rate * f);
      for (const auto& p : peaks) {
        const double z = (f - p.frequency) / p.width;
        s += p.height * std::exp(-0.5 * z * z);
      }
      return s;
    }
  }
  throw ParameterError("SpectrumModel: unknown kind");
}

std::string SpectrumModel::name() const {
  switch (kind) {
    case ModelKind::white: return "white";
    case ModelKind::ar: return "ar";
    case ModelKind::tabulated: return "tabulated";
    case ModelKind::tftr_like: return "tftr_like";
  }
  return "?";
}

SpectralEstimate evaluate_spectrum(const SpectrumModel& model, const FrequencyGrid& grid) {
  SpectralEstimate est;
  est.grid = grid;
  est.values.resize(grid.size);
  est.dof.assign(grid.size, kInfiniteDof);
  for (std::size_t j = 0; j < grid.size; ++j) est.values[j] = model.evaluate(grid.frequency(j));
  est.method.estimator = "model";
  est.method.taper = model.name();
  return est;
}

namespace {

TimeSeries generate_ar(const SpectrumModel& model, std::size_t n, Rng& rng) {
  const std::size_t p = model.ar_coeffs.size();
  const std::size_t burn = 10 * p + 100;
  const double sd = std::sqrt(model.ar_innovation_variance);
  std::vector<double> x(burn + n, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = sd * rng.next_normal();
    for (std::size_t j = 0; j < p && j < t; ++j) v += model.ar_coeffs[j] * x[t - 1 - j];
    x[t] = v;
  }
  return TimeSeries(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()));
}

// Circulant coloring: Hermitian complex Gaussian spectrum scaled by
// sqrt(S(f_j)), inverse transformed. E[x^2] = (1/n) sum_j S(j/n), the Riemann
// sum of the spectral integral. Draw order: DC, then ascending j (re, im
// pairs), then Nyquist for even n.
TimeSeries generate_colored(const SpectrumModel& model, std::size_t n, Rng& rng) {
  const std::size_t half = n / 2;
  std::vector<std::complex<double>> c(half + 1);
  c[0] = std::sqrt(model.evaluate(0.0)) * rng.next_normal();
  for (std::size_t j = 1; j < half + (n % 2); ++j) {
    const double s = model.evaluate(static_cast<double>(j) / static_cast<double>(n));
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    c[j] = std::sqrt(0.5 * s) * std::complex<double>(re, im);
  }
  if (n % 2 == 0) c[half] = std::sqrt(model.evaluate(0.5)) * rng.next_normal();
  std::vector<double> x = fft::inverse_c2r(c, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : x) v *= scale;
  return TimeSeries(std::move(x));
}

}  // namespace

TimeSeries generate(const SpectrumModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 8) throw ParameterError("generate: need N >= 8");
  Rng rng(seed);
  if (model.kind == ModelKind::ar) return generate_ar(model, n, rng);
  return generate_colored(model, n, rng);
}

}  // namespace mtspec
