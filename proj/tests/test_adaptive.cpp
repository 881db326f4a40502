#include <doctest.h>

#include <cmath>

#include "mtspec/adaptive.hpp"
#include "mtspec/estimators.hpp"
#include "mtspec/synth.hpp"
#include "support/fabricate.hpp"

using namespace mtspec;
using testsupport::fabricate_constant;
using testsupport::fabricate_eigenspectra;

namespace {

// The N=300, W-bar=5.46 concentrations, the published reference point for the
// weighting examples.
std::vector<double> table_lambdas() {
  return build_slepian_family(300, 5.46, 10).eigenvalues;
}

WeightingScheme scheme_of(WeightingKind kind, double sigma2) {
  WeightingScheme s;
  s.kind = kind;
  s.sigma2 = sigma2;
  return s;
}

}  // namespace

TEST_CASE("deselection keeps everything when all powers agree") {
  const int k = 10;
  const auto es = fabricate_constant(std::vector<double>(k, 2.5), table_lambdas());
  const auto [field, est] =
      sequential_deselection(es, scheme_of(WeightingKind::sequential_deselection, 1.0));
  for (auto flag : field.selected) CHECK(flag == 1);
  // sigma-hat = 0, everything passes: S = K/(K+1) * S^(0)
  for (double v : est.values) CHECK(v == doctest::Approx(2.5 * 10.0 / 11.0).epsilon(1e-12));
  for (double d : est.dof) CHECK(d == doctest::Approx(20.0));
}

TEST_CASE("deselection removes a wildly biased last taper") {
  const int k = 10;
  std::vector<double> powers(static_cast<std::size_t>(k), 1.0);
  powers.back() = 100.0;
  const auto es = fabricate_constant(powers, table_lambdas());
  const auto [field, est] =
      sequential_deselection(es, scheme_of(WeightingKind::sequential_deselection, 1.0));
  for (std::size_t j = 0; j < es.grid.size; ++j) {
    CHECK(field.selected[field.index(9, j)] == 0);
    for (int kk = 0; kk < 9; ++kk) CHECK(field.selected[field.index(kk, j)] == 1);
  }
  for (double v : est.values) CHECK(v == doctest::Approx(9.0 / 10.0).epsilon(1e-12));
}

TEST_CASE("deselection never deletes beyond the budget") {
  const int k = 10;
  std::vector<double> powers(static_cast<std::size_t>(k), 1.0);
  powers[9] = 500.0;
  powers[8] = 400.0;
  powers[7] = 300.0;
  powers[6] = 200.0;  // four outliers, but floor(0.2 * 10) = 2 may go
  const auto es = fabricate_constant(powers, table_lambdas());
  const auto [field, est] =
      sequential_deselection(es, scheme_of(WeightingKind::sequential_deselection, 1.0));
  for (std::size_t j = 0; j < es.grid.size; ++j) {
    int deleted = 0;
    for (int kk = 0; kk < k; ++kk) deleted += field.selected[field.index(kk, j)] == 0;
    CHECK(deleted == 2);
  }
}

TEST_CASE("deselection requires at least three tapers and supports the 1/K' option") {
  const auto es2 = fabricate_constant({1.0, 1.0}, {0.99, 0.98});
  CHECK_THROWS_AS(
      sequential_deselection(es2, scheme_of(WeightingKind::sequential_deselection, 1.0)),
      ParameterError);
  const auto es = fabricate_constant(std::vector<double>(5, 3.0),
                                     {0.999, 0.998, 0.997, 0.99, 0.95});
  WeightingScheme unbiased = scheme_of(WeightingKind::sequential_deselection, 1.0);
  unbiased.unbiased_denominator = true;
  const auto [field, est] = sequential_deselection(es, unbiased);
  for (double v : est.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("raising alpha_K never deletes more tapers") {
  const std::size_t m = 512;
  const int k = 8;
  Rng rng(99);
  std::vector<double> powers(static_cast<std::size_t>(k) * m);
  for (double& p : powers) {
    const double a = rng.next_normal(), b = rng.next_normal();
    p = 0.5 * (a * a + b * b);
  }
  const std::vector<double> lams = {0.9999, 0.999, 0.995, 0.99, 0.98, 0.96, 0.93, 0.90};
  const auto es = fabricate_eigenspectra(m, k, powers, lams);
  std::vector<int> deleted_prev(m, k);
  for (double alpha : {1.0, 2.0, 3.0}) {
    WeightingScheme s = scheme_of(WeightingKind::sequential_deselection, 1.0);
    s.alpha_k = alpha;
    const auto [field, est] = sequential_deselection(es, s);
    for (std::size_t j = 0; j < m; ++j) {
      int deleted = 0;
      for (int kk = 0; kk < k; ++kk) deleted += field.selected[field.index(kk, j)] == 0;
      CHECK(deleted <= deleted_prev[j]);
      deleted_prev[j] = deleted;
    }
  }
}

TEST_CASE("deselection under white noise deletes rarely and stays calibrated") {
  // The two-consecutive-passes walk caps the no-deletion probability near
  // (1 - e^-3)^2 ~ 0.90; small-K sigma-hat noise pushes it a little lower.
  const std::size_t n = 256;
  const int k = 8;
  const SlepianFamily fam = build_slepian_family(n, 4.0, k);
  std::size_t no_deletion = 0, freqs = 0;
  double level = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TimeSeries x = generate(SpectrumModel::white(1.0), n, seed);
    const EigenSpectra es = eigencoefficients(x, fam, n);
    const auto [field, est] =
        sequential_deselection(es, scheme_of(WeightingKind::sequential_deselection,
                                             x.mean_power()));
    for (std::size_t j = 0; j < es.grid.size; ++j) {
      ++freqs;
      int deleted = 0;
      for (int kk = 0; kk < k; ++kk) deleted += field.selected[field.index(kk, j)] == 0;
      no_deletion += deleted == 0;
      level += est.values[j];
    }
  }
  CHECK(static_cast<double>(no_deletion) / static_cast<double>(freqs) >= 0.75);
  // K/(K+1) shrinkage of a calibrated mean, within Monte-Carlo slack
  CHECK(level / static_cast<double>(freqs) ==
        doctest::Approx(8.0 / 9.0).epsilon(0.03));
}

TEST_CASE("minimal-loss weights collapse to 1/(K+1) when the spectrum sits at sigma^2") {
  const int k = 6;
  // lambda = 1 exactly: the denominator is 1 regardless of S, so the weights
  // are 1/(K+1) and the estimate is K/(K+1) of the mean.
  const auto es = fabricate_constant(std::vector<double>(k, 4.0), std::vector<double>(k, 1.0));
  const auto [field, est] = minimal_loss_weights(es, scheme_of(WeightingKind::minimal_loss, 4.0));
  for (std::size_t i = 0; i < field.weights.size(); ++i)
    CHECK(field.weights[i] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  for (double v : est.values) CHECK(v == doctest::Approx(4.0 * 6.0 / 7.0).epsilon(1e-12));
  for (auto c : field.converged) CHECK(c == 1);
}

TEST_CASE("minimal-loss downweights the leaky tapers by the published factor") {
  const auto lams = table_lambdas();
  const int k = 10;
  const double sigma2 = 1.0;
  const double s_true = 1e-4;  // four decades below sigma^2
  const auto es = fabricate_constant(std::vector<double>(k, s_true), lams);
  const auto [field, est] = minimal_loss_weights(es, scheme_of(WeightingKind::minimal_loss, sigma2));
  const double w0 = field.weights[field.index(0, 0)];
  const double w9 = field.weights[field.index(9, 0)];
  // At sigma^2/S = 1e4 the ratio is (lambda_9 + 1e4 (1 - lambda_9)) /
  // (lambda_0 + 1e4 (1 - lambda_0)) ~ 844; the fixed point only shrinks S
  // further, so 843 is a floor.
  CHECK(w0 / w9 >= 843.0);
}

TEST_CASE("wiener weighting reproduces constant spectra exactly") {
  const int k = 6;
  SUBCASE("equal eigenvalues give uniform effective weights") {
    const auto es =
        fabricate_constant(std::vector<double>(k, 2.0), std::vector<double>(k, 0.95));
    const auto [field, est] = wiener_weights(es, scheme_of(WeightingKind::wiener, 2.0));
    for (std::size_t i = 0; i < field.weights.size(); ++i)
      CHECK(field.weights[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    for (double v : est.values) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("unequal eigenvalues at the white level weight by lambda") {
    const std::vector<double> lams = {0.999, 0.99, 0.97, 0.9, 0.8, 0.6};
    const auto es = fabricate_constant(std::vector<double>(k, 5.0), lams);
    const auto [field, est] = wiener_weights(es, scheme_of(WeightingKind::wiener, 5.0));
    double lam_sum = 0.0;
    for (double l : lams) lam_sum += l;
    // all powers at sigma^2: S converges to sigma^2 and g_k ~ lambda_k
    for (int kk = 0; kk < k; ++kk)
      CHECK(field.weights[field.index(kk, 0)] ==
            doctest::Approx(lams[static_cast<std::size_t>(kk)] / lam_sum).epsilon(1e-9));
    for (double v : est.values) CHECK(v == doctest::Approx(5.0).epsilon(1e-9));
  }
}

TEST_CASE("wiener downweights the last taper more aggressively than minimal loss") {
  const auto lams = table_lambdas();
  const int k = 10;
  const auto es = fabricate_constant(std::vector<double>(k, 1e-4), lams);
  const auto [mf, me] = minimal_loss_weights(es, scheme_of(WeightingKind::minimal_loss, 1.0));
  const auto [wf, we] = wiener_weights(es, scheme_of(WeightingKind::wiener, 1.0));
  const double ml_ratio = mf.weights[mf.index(0, 0)] / mf.weights[mf.index(9, 0)];
  const double wi_ratio = wf.weights[wf.index(0, 0)] / wf.weights[wf.index(9, 0)];
  CHECK(wi_ratio > ml_ratio);
}

TEST_CASE("all weightings are scale covariant") {
  const std::size_t n = 256;
  const TimeSeries x = generate(SpectrumModel::tftr_like(), n, 8);
  const SlepianFamily fam = build_slepian_family(n, 4.0, 8);
  const EigenSpectra es = eigencoefficients(x, fam, n);
  const double a2 = 7.3;  // data scale a, powers scale a^2
  EigenSpectra scaled = es;
  for (double& p : scaled.powers) p *= a2;
  for (auto& c : scaled.coeffs) c *= std::sqrt(a2);
  const double sigma2 = x.mean_power();
  for (WeightingKind kind : {WeightingKind::sequential_deselection, WeightingKind::minimal_loss,
                             WeightingKind::wiener}) {
    const auto base = adaptive_combine(es, scheme_of(kind, sigma2));
    const auto scl = adaptive_combine(scaled, scheme_of(kind, sigma2 * a2));
    for (std::size_t i = 0; i < base.first.weights.size(); ++i)
      CHECK(scl.first.weights[i] == doctest::Approx(base.first.weights[i]).epsilon(1e-9));
    for (std::size_t j = 0; j < es.grid.size; ++j)
      CHECK(scl.second.values[j] ==
            doctest::Approx(base.second.values[j] * a2).epsilon(1e-9));
  }
}

TEST_CASE("fixed-point iterations converge almost everywhere on synthetic data") {
  const std::size_t n = 300;
  std::size_t total = 0, converged = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TimeSeries x = generate(SpectrumModel::tftr_like(), n, seed);
    const SlepianFamily fam = build_slepian_family(n, 5.46, 10);
    const EigenSpectra es = eigencoefficients(x, fam, n);
    for (WeightingKind kind : {WeightingKind::minimal_loss, WeightingKind::wiener}) {
      const auto [field, est] = adaptive_combine(es, scheme_of(kind, x.mean_power()));
      for (auto c : field.converged) {
        ++total;
        converged += c;
      }
      for (int it : field.iterations_used) CHECK(it <= 50);
    }
  }
  CHECK(static_cast<double>(converged) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("scheme validation rejects bad parameters") {
  const auto es = fabricate_constant({1.0, 1.0, 1.0}, {0.99, 0.98, 0.97});
  WeightingScheme s = scheme_of(WeightingKind::minimal_loss, 0.0);
  CHECK_THROWS_AS(minimal_loss_weights(es, s), ParameterError);
  s.sigma2 = 1.0;
  s.alpha_k = 0.0;
  CHECK_THROWS_AS(sequential_deselection(es, s), ParameterError);
  s.alpha_k = 2.0;
  s.max_delete_fraction = 0.7;
  CHECK_THROWS_AS(sequential_deselection(es, s), ParameterError);
}
