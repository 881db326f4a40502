#include "mtspec/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mtspec/estimators.hpp"

namespace mtspec {

const char* weighting_name(WeightingKind kind) {
  switch (kind) {
    case WeightingKind::uniform: return "uniform";
    case WeightingKind::sequential_deselection: return "seqdesel";
    case WeightingKind::minimal_loss: return "minloss";
    case WeightingKind::wiener: return "wiener";
  }
  return "?";
}

WeightingKind weighting_from_name(const std::string& name) {
  if (name == "uniform") return WeightingKind::uniform;
  if (name == "seqdesel") return WeightingKind::sequential_deselection;
  if (name == "minloss") return WeightingKind::minimal_loss;
  if (name == "wiener") return WeightingKind::wiener;
  throw ParameterError("unknown weighting '" + name + "'");
}

namespace {

WeightField make_field(const EigenSpectra& es) {
  WeightField wf;
  wf.grid = es.grid;
  wf.K = es.K;
  wf.weights.assign(static_cast<std::size_t>(es.K) * es.grid.size, 0.0);
  wf.selected.assign(static_cast<std::size_t>(es.K) * es.grid.size, 1);
  wf.iterations_used.assign(es.grid.size, 0);
  wf.converged.assign(es.grid.size, 1);
  return wf;
}

SpectralEstimate finish(const EigenSpectra& es, const WeightField& wf,
                        const WeightingScheme& scheme) {
  SpectralEstimate est = combine(es, wf.weights);
  est.method.weighting = weighting_name(scheme.kind);
  const std::size_t bad = wf.non_converged_count();
  if (bad > 0) est.method.note = std::to_string(bad) + " frequencies not converged";
  return est;
}

}  // namespace

std::pair<WeightField, SpectralEstimate> sequential_deselection(const EigenSpectra& es,
                                                                const WeightingScheme& scheme) {
  scheme.validate();
  const int K = es.K;
  if (K < 3) throw ParameterError("sequential_deselection: need K >= 3");
  const std::size_t m = es.grid.size;
  const int budget = static_cast<int>(std::floor(scheme.max_delete_fraction * K));

  WeightField wf = make_field(es);
  for (std::size_t j = 0; j < m; ++j) {
    int deleted = 0;
    int consecutive_passes = 0;
    // Stats come from the retained estimates strictly below the one under
    // test; deletion only ever happens at the index being tested, so those
    // are always the first `idx` powers.
    for (int idx = K - 1; idx >= 2; --idx) {
      double sum = 0.0, sumsq = 0.0;
      for (int k = 0; k < idx; ++k) {
        const double p = es.power(k, j);
        sum += p;
        sumsq += p * p;
      }
      const double n = static_cast<double>(idx);
      const double mean = sum / n;
      const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
      const double sd = std::sqrt(var);
      if (es.power(idx, j) <= mean + scheme.alpha_k * sd) {
        if (++consecutive_passes == 2) break;
      } else {
        if (deleted >= budget) break;
        wf.selected[wf.index(idx, j)] = 0;
        ++deleted;
        consecutive_passes = 0;
      }
    }
    const int retained = K - deleted;
    const double denom = scheme.unbiased_denominator ? static_cast<double>(retained)
                                                     : static_cast<double>(retained + 1);
    for (int k = 0; k < K; ++k)
      if (wf.selected[wf.index(k, j)]) wf.weights[wf.index(k, j)] = 1.0 / denom;
  }
  return {wf, finish(es, wf, scheme)};
}

namespace {

// Shared fixed-point driver for the two model-based weightings. weight_fn
// fills the per-taper weights for the current spectrum value and returns the
// updated spectrum estimate.
template <typename WeightFn>
std::pair<WeightField, SpectralEstimate> fixed_point(const EigenSpectra& es,
                                                     const WeightingScheme& scheme,
                                                     WeightFn&& weight_fn) {
  scheme.validate();
  if (es.K < 2) throw ParameterError("adaptive weighting: need K >= 2");
  const std::size_t m = es.grid.size;
  WeightField wf = make_field(es);
  std::vector<double> c(static_cast<std::size_t>(es.K));
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.5 * (es.power(0, j) + es.power(1, j));
    if (!(s > 0.0)) {
      double mean = 0.0;
      for (int k = 0; k < es.K; ++k) mean += es.power(k, j);
      s = mean / static_cast<double>(es.K);
    }
    int it = 0;
    bool ok = false;
    for (; it < scheme.max_iter; ++it) {
      const double s_new = s > 0.0 ? weight_fn(j, s, c) : 0.0;
      const double denom = std::max(std::abs(s_new), 1e-300);
      const bool done = std::abs(s_new - s) / denom < scheme.rel_tol;
      s = s_new;
      if (done) {
        ok = true;
        ++it;
        break;
      }
    }
    if (s <= 0.0) {
      // Degenerate all-zero powers: fall back to the flat-spectrum weights.
      weight_fn(j, scheme.sigma2, c);
      ok = true;
    }
    wf.iterations_used[j] = it;
    wf.converged[j] = ok ? 1 : 0;
    for (int k = 0; k < es.K; ++k) wf.weights[wf.index(k, j)] = c[static_cast<std::size_t>(k)];
  }
  return {wf, finish(es, wf, scheme)};
}

}  // namespace

std::pair<WeightField, SpectralEstimate> minimal_loss_weights(const EigenSpectra& es,
                                                              const WeightingScheme& scheme) {
  const double kp1 = static_cast<double>(es.K) + 1.0;
  return fixed_point(es, scheme, [&](std::size_t j, double s, std::vector<double>& c) {
    const double ratio = scheme.sigma2 / s;
    double s_new = 0.0;
    for (int k = 0; k < es.K; ++k) {
      const double lam = es.eigenvalues[static_cast<std::size_t>(k)];
      c[static_cast<std::size_t>(k)] = 1.0 / (kp1 * (lam + ratio * (1.0 - lam)));
      s_new += c[static_cast<std::size_t>(k)] * es.power(k, j);
    }
    return s_new;
  });
}

std::pair<WeightField, SpectralEstimate> wiener_weights(const EigenSpectra& es,
                                                        const WeightingScheme& scheme) {
  return fixed_point(es, scheme, [&](std::size_t j, double s, std::vector<double>& c) {
    const double ratio = scheme.sigma2 / s;
    double gsum = 0.0;
    for (int k = 0; k < es.K; ++k) {
      const double lam = es.eigenvalues[static_cast<std::size_t>(k)];
      const double d = lam + ratio * (1.0 - lam);
      c[static_cast<std::size_t>(k)] = lam / (d * d);  // g_k up to the common 1/K factor
      gsum += c[static_cast<std::size_t>(k)];
    }
    // Renormalizing so the weights sum to one reproduces constant spectra
    // exactly; the recorded weights are the effective multipliers g_k/sum g.
    double s_new = 0.0;
    for (int k = 0; k < es.K; ++k) {
      c[static_cast<std::size_t>(k)] /= gsum;
      s_new += c[static_cast<std::size_t>(k)] * es.power(k, j);
    }
    return s_new;
  });
}

std::pair<WeightField, SpectralEstimate> adaptive_combine(const EigenSpectra& es,
                                                          const WeightingScheme& scheme) {
  switch (scheme.kind) {
    case WeightingKind::uniform: {
      WeightField wf = make_field(es);
      std::fill(wf.weights.begin(), wf.weights.end(), 1.0 / static_cast<double>(es.K));
      return {std::move(wf), uniform_multitaper(es)};
    }
    case WeightingKind::sequential_deselection: return sequential_deselection(es, scheme);
    case WeightingKind::minimal_loss: return minimal_loss_weights(es, scheme);
    case WeightingKind::wiener: return wiener_weights(es, scheme);
  }
  throw ParameterError("adaptive_combine: unknown weighting kind");
}

}  // namespace mtspec
