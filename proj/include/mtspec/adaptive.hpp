#pragma once

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

#include "mtspec/types.hpp"

namespace mtspec {

enum class WeightingKind { uniform, sequential_deselection, minimal_loss, wiener };

const char* weighting_name(WeightingKind kind);
WeightingKind weighting_from_name(const std::string& name);

// Parameters of the adaptive multitaper weightings. sigma2 is the total
// sample power (1/N) sum x^2 of the record behind the eigenspectra.
struct WeightingScheme {
  WeightingKind kind = WeightingKind::uniform;
  double alpha_k = 2.0;              // one-sided test threshold (deselection)
  double max_delete_fraction = 0.20; // deselection budget
  double sigma2 = 0.0;               // total power; must be > 0 for adaptive kinds
  int max_iter = 50;                 // fixed-point iteration cap
  double rel_tol = 1e-6;             // fixed-point convergence tolerance
  bool unbiased_denominator = false; // use 1/K' instead of 1/(K'+1) (sensitivity studies)

  void validate() const {
    if (!(alpha_k > 0.0)) throw ParameterError("WeightingScheme: alpha_K must be positive");
    if (max_delete_fraction < 0.0 || max_delete_fraction > 0.5)
      throw ParameterError("WeightingScheme: max_delete_fraction must lie in [0, 0.5]");
    if (kind != WeightingKind::uniform && !(sigma2 > 0.0))
      throw ParameterError("WeightingScheme: sigma2 must be positive");
    if (max_iter < 1) throw ParameterError("WeightingScheme: max_iter must be >= 1");
    if (!(rel_tol > 0.0)) throw ParameterError("WeightingScheme: rel_tol must be positive");
  }
};

// Per-frequency combining weights c_k(f) plus bookkeeping: the deselection
// mask, iteration counts for the fixed-point weightings, and convergence flags.
struct WeightField {
  FrequencyGrid grid;
  int K = 0;
  std::vector<double> weights;       // K x M row-major
  std::vector<std::uint8_t> selected;  // K x M, 1 = retained
  std::vector<int> iterations_used;  // per frequency, 0 for non-iterative kinds
  std::vector<std::uint8_t> converged;  // per frequency

  std::size_t index(int k, std::size_t j) const { return static_cast<std::size_t>(k) * grid.size + j; }
  std::size_t non_converged_count() const {
    std::size_t c = 0;
    for (auto v : converged) c += (v == 0);
    return c;
  }
};

// Per frequency, tests the highest-order eigenspectra against the mean plus
// alpha_K standard deviations of the retained lower-order ones, deleting
// failures from the top until two consecutive passes or the deletion budget
// floor(max_delete_fraction * K) is reached. Retained estimates are averaged
// with the 1/(K'+1) denominator.
std::pair<WeightField, SpectralEstimate> sequential_deselection(const EigenSpectra& es,
                                                                const WeightingScheme& scheme);

// Minimum-expected-error weights c_k = (1/(K+1)) / (lambda_k +
// (sigma^2/S)(1-lambda_k)), iterated to a fixed point in S(f).
std::pair<WeightField, SpectralEstimate> minimal_loss_weights(const EigenSpectra& es,
                                                              const WeightingScheme& scheme);

// Wiener-filter weighting: g_k = (1/K) lambda_k / [lambda_k +
// (sigma^2/S)(1-lambda_k)]^2, renormalized each iteration so a flat spectrum
// at sigma^2 is reproduced exactly. The recorded weights are the effective
// per-taper multipliers g_k / sum_j g_j.
std::pair<WeightField, SpectralEstimate> wiener_weights(const EigenSpectra& es,
                                                        const WeightingScheme& scheme);

// Dispatch on scheme.kind (uniform included).
std::pair<WeightField, SpectralEstimate> adaptive_combine(const EigenSpectra& es,
                                                          const WeightingScheme& scheme);

}  // namespace mtspec
