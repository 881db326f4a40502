#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtspec/adaptive.hpp"
#include "mtspec/synth.hpp"
#include "mtspec/types.hpp"

namespace mtspec {

// Deterministic segmentation of an N-sample record.
struct SegmentPlan {
  std::size_t segment_len = 0;
  double overlap_fraction = 0.0;
  double step = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> starts;
  bool nonstandard_overlap = false;  // overlap outside {0, 0.5}; callers may warn
};

SegmentPlan plan_segments(std::size_t n, std::size_t segment_len, double overlap_fraction);

// Adaptive multitaper estimate of the full record at the given bandwidth
// (cycles/sample), treated as the converged value of the true spectrum.
SpectralEstimate converged_reference(const TimeSeries& x, double bandwidth,
                                     WeightingKind weighting, std::size_t grid_size);

// Linear interpolation in log S onto a target grid.
SpectralEstimate resample_log(const SpectralEstimate& est, const FrequencyGrid& grid);

// B(f) = mean_i S_i(f) - S_con(f) over (typically overlapping) segments.
std::vector<double> empirical_bias(const std::vector<SpectralEstimate>& estimates,
                                   const SpectralEstimate& reference);

// Nonstationarity-robust variance from nonoverlapping segments:
// (2 / (3 (N_s - 2))) sum_i (S_i - (S_{i-1} + S_{i+1})/2)^2.
std::vector<double> empirical_variance(const std::vector<SpectralEstimate>& estimates);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<Band> default_bands();  // the three published bands, normalized

struct BandScores {
  std::vector<double> per_band;
  double combined = 0.0;
};

// Unweighted mean of the RMSE curve over the grid points in each band and
// over their union.
BandScores band_scores(const std::vector<double>& rmse, const FrequencyGrid& grid,
                       const std::vector<Band>& bands);

enum class MethodKind { smoothed_periodogram, multitaper, hybrid, welch };

// One comparison entrant. The bandwidth grid means the boxcar halfwidth for
// smoothed periodograms and hybrids, and the taper bandwidth for multitapers;
// Welch runs a single fixed configuration.
struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::smoothed_periodogram;
  std::vector<double> w_grid;  // cycles/sample

  std::string taper = "tukey";      // smoothed_periodogram: rect | tukey | slepian
  double tukey_alpha_n = 33.0;
  double slepian_nw = 1.0;

  WeightingKind weighting = WeightingKind::uniform;  // multitaper & hybrid
  int k_override = 0;               // multitaper: 0 means round(2 W N)

  double hybrid_nw = 2.46;          // hybrid taper family
  int hybrid_k = 4;

  int welch_divide = 2;             // welch: segments per comparison window
  double welch_nw = 1.0;            // per-subsegment Slepian taper bandwidth
};

struct MethodResult {
  MethodSpec spec;
  std::vector<double> scores;            // combined band score per W
  std::vector<BandScores> band_details;  // per W
  std::size_t optimal_index = 0;
  double optimal_w = 0.0;
  double optimal_score = 0.0;
  bool optimum_at_edge = false;
  std::vector<double> bias;      // at the optimal W, on the comparison grid
  std::vector<double> variance;
  std::vector<double> rmse;
  bool failed = false;
  std::string error;
};

struct CompareConfig {
  SpectrumModel model = SpectrumModel::tftr_like();
  std::size_t record_len = 45000;
  std::uint64_t seed = 12345;
  bool use_external_series = false;
  TimeSeries series;  // when use_external_series

  std::size_t segment_len = 300;
  double bias_overlap = 0.5;  // bias plan; the variance plan never overlaps
  std::size_t grid_size = 1201;

  double reference_bandwidth = 126.0 / 45000.0;  // W-bar = 126, K = 252
  WeightingKind reference_weighting = WeightingKind::sequential_deselection;
  std::size_t reference_grid = 180001;

  std::vector<Band> bands = default_bands();
  std::vector<MethodSpec> methods;

  // The published §VI entrant set at N = 300.
  static CompareConfig paper_defaults();
};

struct ComparisonReport {
  FrequencyGrid grid;
  SpectralEstimate reference;  // resampled onto the comparison grid
  std::vector<MethodResult> methods;
  std::vector<Band> bands;
  std::uint64_t seed = 0;
  std::string model_name;
};

// Evaluates one method's score curve over its bandwidth grid; ties break
// toward smaller W.
MethodResult optimize_bandwidth(const MethodSpec& spec, const TimeSeries& record,
                                const SegmentPlan& bias_plan, const SegmentPlan& var_plan,
                                const SpectralEstimate& reference,
                                const std::vector<Band>& bands, std::size_t grid_size);

// Full cross-method comparison; failed methods are kept with error markers.
ComparisonReport compare_methods(const CompareConfig& config);

}  // namespace mtspec
