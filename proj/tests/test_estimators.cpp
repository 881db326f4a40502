#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mtspec/estimators.hpp"
#include "mtspec/jackknife.hpp"
#include "mtspec/synth.hpp"

using namespace mtspec;

namespace {

// Mean over an interior band of the one-sided grid.
double band_average(const SpectralEstimate& est, double lo = 0.05, double hi = 0.45) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < est.grid.size; ++j) {
    const double f = est.grid.frequency(j);
    if (f >= lo && f <= hi) {
      acc += est.values[j];
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

}  // namespace

TEST_CASE("periodogram of a constant is a DC line") {
  const std::size_t n = 64;
  const double c = 1.7;
  TimeSeries x(std::vector<double>(n, c));
  // L = 2(M-1) = 512 = 8N puts the multiples of 1/N exactly on the grid
  const SpectralEstimate est = periodogram(x, 257);
  CHECK(std::abs(est.values[0] - static_cast<double>(n) * c * c) < 1e-9);
  for (int k = 1; k <= 4; ++k) {
    const std::size_t j = static_cast<std::size_t>(k) * 8;  // f = k/N
    CHECK(est.values[j] < 1e-10 * est.values[0]);
  }
  CHECK(est.dof.front() == 1.0);
  CHECK(est.dof.back() == 1.0);
  CHECK(est.dof[5] == 2.0);
}

TEST_CASE("unsmoothed estimators satisfy Parseval on the two-sided grid") {
  const TimeSeries x = generate(SpectrumModel::tftr_like(), 300, 99);
  SUBCASE("periodogram vs sample power") {
    const SpectralEstimate est = periodogram(x, 300);
    CHECK(std::abs(two_sided_mean(est) / x.mean_power() - 1.0) < 1e-10);
  }
  SUBCASE("tapered periodogram vs taper-weighted sample power") {
    const Taper t = build_tukey_taper(300, 33.0);
    const SpectralEstimate est = tapered_periodogram(x, t, 300);
    double num = 0.0;
    for (std::size_t i = 0; i < 300; ++i) {
      const double xv = x.samples[i] * t.values[i];
      num += xv * xv;
    }
    CHECK(std::abs(two_sided_mean(est) / (num / t.energy()) - 1.0) < 1e-10);
  }
}

TEST_CASE("white-noise periodogram is flat at sigma^2 over 200 seeds") {
  double acc = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TimeSeries x = generate(SpectrumModel::white(1.0), 1024, seed);
    acc += band_average(periodogram(x, 1024));
  }
  CHECK(std::abs(acc / 200.0 - 1.0) < 0.02);
}

TEST_CASE("rectangular taper reduces the tapered periodogram to the periodogram") {
  const TimeSeries x = generate(SpectrumModel::white(2.0), 128, 5);
  const SpectralEstimate a = periodogram(x, 128);
  const SpectralEstimate b = tapered_periodogram(x, rectangular_taper(128), 128);
  for (std::size_t j = 0; j < a.grid.size; ++j)
    CHECK(std::abs(a.values[j] - b.values[j]) <= 1e-12 * std::max(1.0, a.values[j]));
}

TEST_CASE("tukey-tapered white noise stays calibrated over 500 seeds") {
  const Taper t = build_tukey_taper(300, 33.0);
  double acc = 0.0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const TimeSeries x = generate(SpectrumModel::white(1.0), 300, seed);
    acc += band_average(tapered_periodogram(x, t, 300));
  }
  CHECK(std::abs(acc / 500.0 - 1.0) < 0.03);
}

TEST_CASE("slepian taper suppresses sinusoid leakage at three Rayleigh widths by 20 dB") {
  const std::size_t n = 300;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = std::sin(2.0 * M_PI * 0.25 * static_cast<double>(i));
  const TimeSeries x(std::move(s));
  const Taper slepian = build_slepian_family(n, 2.0, 1).tapers.front();
  const SpectralEstimate tapered = tapered_periodogram(x, slepian, 1201);
  const SpectralEstimate plain = periodogram(x, 1201);
  // peak sidelobe level in a half-Rayleigh neighborhood of f0 + 3/N
  const double f_lo = 0.25 + 3.0 / 300.0 - 0.5 / 300.0;
  const double f_hi = 0.25 + 3.0 / 300.0 + 0.5 / 300.0;
  double lobe_t = 0.0, lobe_p = 0.0;
  for (std::size_t j = 0; j < tapered.grid.size; ++j) {
    const double f = tapered.grid.frequency(j);
    if (f >= f_lo && f <= f_hi) {
      lobe_t = std::max(lobe_t, tapered.values[j]);
      lobe_p = std::max(lobe_p, plain.values[j]);
    }
  }
  CHECK(10.0 * std::log10(lobe_p / lobe_t) >= 20.0);
}

TEST_CASE("boxcar smoothing is an order-preserving linear average") {
  const TimeSeries x = generate(SpectrumModel::tftr_like(), 300, 3);
  const SpectralEstimate raw = periodogram(x, 300);
  const double w = 0.01;
  const SpectralEstimate smooth = boxcar_smooth(raw, w);

  SUBCASE("constant input is unchanged") {
    SpectralEstimate flat = raw;
    std::fill(flat.values.begin(), flat.values.end(), 3.25);
    const SpectralEstimate out = boxcar_smooth(flat, w);
    for (double v : out.values) CHECK(v == doctest::Approx(3.25).epsilon(1e-14));
  }
  SUBCASE("halfwidth below one grid spacing is the identity") {
    const SpectralEstimate out = boxcar_smooth(raw, 0.4 * raw.grid.spacing());
    for (std::size_t j = 0; j < raw.grid.size; ++j) CHECK(out.values[j] == raw.values[j]);
  }
  SUBCASE("homogeneity and window bounds") {
    SpectralEstimate scaled = raw;
    for (double& v : scaled.values) v *= 4.0;
    const SpectralEstimate out = boxcar_smooth(scaled, w);
    const std::size_t r = static_cast<std::size_t>(std::floor(w / raw.grid.spacing()));
    for (std::size_t j = 0; j < raw.grid.size; ++j) {
      CHECK(out.values[j] == doctest::Approx(4.0 * smooth.values[j]).epsilon(1e-12));
      const std::size_t a = j >= r ? j - r : 0;
      const std::size_t b = std::min(j + r, raw.grid.size - 1);
      const double lo = *std::min_element(raw.values.begin() + a, raw.values.begin() + b + 1);
      const double hi = *std::max_element(raw.values.begin() + a, raw.values.begin() + b + 1);
      CHECK(smooth.values[j] >= lo - 1e-12);
      CHECK(smooth.values[j] <= hi + 1e-12);
    }
  }
  SUBCASE("dof is capped at 2 (2WN) and never below the input") {
    for (std::size_t j = 0; j < smooth.grid.size; ++j) {
      CHECK(smooth.dof[j] <= 2.0 * (2.0 * w * 300.0) + 1e-9);
      CHECK(smooth.dof[j] >= raw.dof[j]);
    }
  }
  SUBCASE("halfwidth domain") {
    CHECK_THROWS_AS(boxcar_smooth(raw, 0.0), ParameterError);
    CHECK_THROWS_AS(boxcar_smooth(raw, 0.25), ParameterError);
  }
}

TEST_CASE("boxcar smoothing reduces white-noise variance by about 1/(2WN)") {
  const std::size_t n = 300;
  const double w = 0.014;
  std::vector<double> raw_at, smooth_at;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const TimeSeries x = generate(SpectrumModel::white(1.0), n, seed);
    const SpectralEstimate raw = periodogram(x, n);
    const SpectralEstimate smooth = boxcar_smooth(raw, w);
    const std::size_t mid = raw.grid.size / 2;
    raw_at.push_back(raw.values[mid]);
    smooth_at.push_back(smooth.values[mid]);
  }
  auto variance = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
  };
  const double ratio = variance(smooth_at) / variance(raw_at);
  const double expected = 1.0 / (2.0 * w * static_cast<double>(n));
  CHECK(ratio > 0.7 * expected);
  CHECK(ratio < 1.3 * expected);
}

TEST_CASE("eigencoefficients recover the tapers themselves") {
  const SlepianFamily fam = build_slepian_family(128, 3.0, 4);
  SUBCASE("zero input gives zero coefficients") {
    TimeSeries x(std::vector<double>(128, 0.0));
    const EigenSpectra es = eigencoefficients(x, fam, 128);
    for (const auto& c : es.coeffs) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("taper 0 as data: unit projection on itself, none on taper 1") {
    TimeSeries x(fam.tapers[0].values);
    const EigenSpectra es = eigencoefficients(x, fam, 128);
    CHECK(std::abs(es.coeff(0, 0) - 1.0) < 1e-10);
    CHECK(std::abs(es.coeff(1, 0)) < 1e-10);
  }
  SUBCASE("length mismatch is rejected") {
    TimeSeries x(std::vector<double>(64, 1.0));
    CHECK_THROWS_AS(eigencoefficients(x, fam, 128), ParameterError);
  }
  SUBCASE("powers are the squared coefficient magnitudes") {
    const TimeSeries x = generate(SpectrumModel::white(1.0), 128, 11);
    const EigenSpectra es = eigencoefficients(x, fam, 128);
    for (std::size_t i = 0; i < es.powers.size(); ++i)
      CHECK(std::abs(es.powers[i] - std::norm(es.coeffs[i])) <=
            1e-12 * std::max(es.powers[i], 1e-30));
  }
}

TEST_CASE("eigenspectra of distinct tapers are nearly uncorrelated on white noise") {
  const std::size_t n = 256;
  const int k = 6;
  const SlepianFamily fam = build_slepian_family(n, 4.0, k);
  const std::size_t trials = 1000;
  const std::size_t bin = 300;  // fixed interior frequency on the 4N grid
  std::vector<std::vector<double>> p(static_cast<std::size_t>(k),
                                     std::vector<double>(trials));
  for (std::size_t t = 0; t < trials; ++t) {
    const TimeSeries x = generate(SpectrumModel::white(1.0), n, 1000 + t);
    const EigenSpectra es = eigencoefficients(x, fam, n);
    for (int kk = 0; kk < k; ++kk) p[static_cast<std::size_t>(kk)][t] = es.power(kk, bin);
  }
  auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ma += a[i];
      mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(a.size());
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j)
      CHECK(std::abs(corr(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)])) <=
            0.1);
}

TEST_CASE("combine applies the effective-sample-size dof rule") {
  const SlepianFamily fam = build_slepian_family(128, 3.0, 4);
  const TimeSeries x = generate(SpectrumModel::white(1.0), 128, 21);
  const EigenSpectra es = eigencoefficients(x, fam, 128);
  const std::size_t m = es.grid.size;

  SUBCASE("uniform weights give dof 2K and reproduce the plain mean") {
    const SpectralEstimate est = uniform_multitaper(es);
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(est.dof[j] == doctest::Approx(8.0));
      double mean = 0.0;
      for (int kk = 0; kk < 4; ++kk) mean += es.power(kk, j);
      CHECK(est.values[j] == doctest::Approx(mean / 4.0).epsilon(1e-12));
    }
  }
  SUBCASE("a single unit weight returns that eigenspectrum with dof 2") {
    std::vector<double> w(4 * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) w[j] = 1.0;
    const SpectralEstimate est = combine(es, w);
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(est.values[j] == es.power(0, j));
      CHECK(est.dof[j] == doctest::Approx(2.0));
    }
  }
  SUBCASE("K=1 uniform reproduces the k=0 tapered periodogram") {
    const SlepianFamily one = build_slepian_family(128, 3.0, 1);
    const EigenSpectra es1 = eigencoefficients(x, one, 128);
    const SpectralEstimate est = uniform_multitaper(es1);
    const SpectralEstimate direct = tapered_periodogram(x, one.tapers[0], 128);
    for (std::size_t j = 0; j < m; ++j)
      CHECK(est.values[j] == doctest::Approx(direct.values[j]).epsilon(1e-12));
  }
  SUBCASE("negative and overscaled weights are rejected") {
    std::vector<double> w(4 * m, 0.25);
    w[10] = -0.1;
    CHECK_THROWS_AS(combine(es, w), ParameterError);
    std::fill(w.begin(), w.end(), 0.30);  // sums to 1.2
    CHECK_THROWS_AS(combine(es, w), ParameterError);
  }
}

TEST_CASE("hybrid estimate composes multitaper and boxcar") {
  const TimeSeries x = generate(SpectrumModel::white(1.0), 256, 77);
  const SlepianFamily fam = build_slepian_family(256, 2.46, 4);
  WeightingScheme uniform;
  SUBCASE("kernel below the grid spacing leaves the multitaper untouched") {
    const SpectralEstimate pure = uniform_multitaper(eigencoefficients(x, fam, 256));
    const SpectralEstimate hyb = hybrid_estimate(x, fam, uniform, 1e-6, 256);
    for (std::size_t j = 0; j < pure.grid.size; ++j) CHECK(hyb.values[j] == pure.values[j]);
    CHECK(hyb.method.estimator == "hybrid");
  }
  SUBCASE("white-noise calibration within 2% over 200 seeds") {
    double acc = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const TimeSeries xs = generate(SpectrumModel::white(1.0), 1024, seed);
      const SlepianFamily f4 = build_slepian_family(1024, 2.46, 4);
      acc += band_average(hybrid_estimate(xs, f4, uniform, 0.0125, 1024));
    }
    CHECK(std::abs(acc / 200.0 - 1.0) < 0.02);
  }
  SUBCASE("descriptor records both bandwidths") {
    const SpectralEstimate hyb = hybrid_estimate(x, fam, uniform, 0.02, 256);
    CHECK(hyb.method.time_bandwidth == doctest::Approx(2.46));
    CHECK(hyb.method.kernel_halfwidth == doctest::Approx(0.02));
  }
}

TEST_CASE("welch averages tapered segment periodograms") {
  const TimeSeries x = generate(SpectrumModel::white(1.0), 1024, 4);
  SUBCASE("one full segment equals the tapered periodogram") {
    const Taper t = build_tukey_taper(1024, 50.0);
    const SpectralEstimate w = welch_estimate(x, 1024, 0.0, t, 1024);
    const SpectralEstimate direct = tapered_periodogram(x, t, 1024);
    for (std::size_t j = 0; j < w.grid.size; ++j) CHECK(w.values[j] == direct.values[j]);
    CHECK(w.dof[5] == doctest::Approx(2.0));
  }
  SUBCASE("eight segments shrink the variance roughly eightfold") {
    const Taper t = build_tukey_taper(128, 16.0);
    std::vector<double> vals;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const TimeSeries xs = generate(SpectrumModel::white(1.0), 1024, 300 + seed);
      const SpectralEstimate w = welch_estimate(xs, 128, 0.0, t, 512);
      vals.push_back(w.values[w.grid.size / 2]);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size() - 1);
    const double expected = mean * mean / 8.0;
    CHECK(var > 0.7 * expected);
    CHECK(var < 1.3 * expected);
    CHECK(welch_estimate(x, 128, 0.0, t, 512).dof[10] == doctest::Approx(16.0));
  }
  SUBCASE("parameter validation") {
    const Taper t = build_tukey_taper(128, 16.0);
    TimeSeries small(std::vector<double>(100, 1.0));
    CHECK_THROWS_AS(welch_estimate(small, 128, 0.0, t, 512), ParameterError);
    CHECK_THROWS_AS(welch_estimate(x, 128, 0.95, t, 512), ParameterError);
  }
}

TEST_CASE("multitaper tracks a known AR(2) spectrum within three jackknife sigmas") {
  const SpectrumModel model = SpectrumModel::autoregressive({0.75, -0.5}, 1.0);
  const std::size_t n = 4096;
  const TimeSeries x = generate(model, n, 2024);
  const SlepianFamily fam = build_slepian_family(n, 4.0, 8);
  const EigenSpectra es = eigencoefficients(x, fam, n);
  const SpectralEstimate est = uniform_multitaper(es);
  const LogSpectrumStats stats = log_estimates(es);
  std::size_t inside = 0, total = 0;
  for (std::size_t j = 0; j < est.grid.size; ++j) {
    const double f = est.grid.frequency(j);
    if (f < 0.01 || f > 0.49) continue;
    const double truth = model.evaluate(f);
    ++total;
    if (std::abs(std::log(est.values[j]) - std::log(truth)) <=
        3.0 * std::sqrt(stats.jack_var[j]))
      ++inside;
  }
  CHECK(static_cast<double>(inside) / static_cast<double>(total) >= 0.90);
}
