#pragma once

#include <filesystem>
#include <string>

#include "mtspec/adaptive.hpp"
#include "mtspec/harness.hpp"
#include "mtspec/tapers.hpp"
#include "mtspec/types.hpp"

namespace mtspec::io {

// Round-trippable fixed formatting; every numeric output goes through this so
// repeated runs are byte-identical.
std::string format_double(double v);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& x);
TimeSeries read_series_csv(const std::filesystem::path& path, double dt = 1.0);

// Little-endian float64 payload plus a key=value sidecar at <path>.meta
// (sample_rate_hz, n_samples, encoding).
void write_series_raw(const std::filesystem::path& path, const TimeSeries& x);
TimeSeries read_series_raw(const std::filesystem::path& path);

// frequency_hz,power,dof,ci_lo,ci_hi with ci columns blank when absent.
void write_estimate_csv(const std::filesystem::path& path, const SpectralEstimate& est,
                        double dt = 1.0);

// frequency_hz,k,weight,selected
void write_weights_csv(const std::filesystem::path& path, const WeightField& field,
                       double dt = 1.0);

// index,value
void write_taper_csv(const std::filesystem::path& path, const Taper& taper);

// Comparison outputs: per-method RMSE decomposition at the optimal bandwidth,
// per-method score curves, a cross-method summary, and RMSE ratio curves
// relative to the hybrid entrant when present.
void write_report(const std::filesystem::path& dir, const ComparisonReport& report,
                  double dt = 1.0);

}  // namespace mtspec::io
