#include "mtspec/harness.hpp"

#include <algorithm>
#include <cmath>

#include "mtspec/estimators.hpp"

namespace mtspec {

SegmentPlan plan_segments(std::size_t n, std::size_t segment_len, double overlap_fraction) {
  if (segment_len < 1 || segment_len > n)
    throw ParameterError("plan_segments: segment length must lie in [1, N]");
  if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
    throw ParameterError("plan_segments: overlap must lie in [0, 1)");
  SegmentPlan plan;
  plan.segment_len = segment_len;
  plan.overlap_fraction = overlap_fraction;
  plan.step = static_cast<double>(segment_len) * (1.0 - overlap_fraction);
  plan.count =
      static_cast<std::size_t>(std::floor(static_cast<double>(n - segment_len) / plan.step)) + 1;
  plan.starts.reserve(plan.count);
  for (std::size_t i = 0; i < plan.count; ++i)
    plan.starts.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(i) * plan.step)));
  plan.nonstandard_overlap = overlap_fraction != 0.0 && overlap_fraction != 0.5;
  return plan;
}

SpectralEstimate converged_reference(const TimeSeries& x, double bandwidth,
                                     WeightingKind weighting, std::size_t grid_size) {
  const double nw = bandwidth * static_cast<double>(x.size());
  const int k = std::max(3, default_taper_count(nw));
  const SlepianFamily fam = build_slepian_family(x.size(), nw, k);
  const EigenSpectra es = eigencoefficients(x, fam, grid_size);
  WeightingScheme scheme;
  scheme.kind = weighting;
  scheme.sigma2 = x.mean_power();
  SpectralEstimate est = adaptive_combine(es, scheme).second;
  est.method.n_samples = x.size();
  est.method.time_bandwidth = nw;
  est.method.note = "converged reference";
  return est;
}

SpectralEstimate resample_log(const SpectralEstimate& est, const FrequencyGrid& grid) {
  if (est.grid == grid) return est;
  SpectralEstimate out;
  out.grid = grid;
  out.method = est.method;
  out.values.resize(grid.size);
  out.dof.resize(grid.size);
  const double src_df = est.grid.spacing();
  for (std::size_t j = 0; j < grid.size; ++j) {
    const double f = grid.frequency(j);
    const double pos = f / src_df;
    const std::size_t i0 = std::min(static_cast<std::size_t>(pos), est.grid.size - 2);
    const double t = std::clamp(pos - static_cast<double>(i0), 0.0, 1.0);
    const double lo = std::max(est.values[i0], 1e-300);
    const double hi = std::max(est.values[i0 + 1], 1e-300);
    out.values[j] = std::exp((1.0 - t) * std::log(lo) + t * std::log(hi));
    out.dof[j] = (1.0 - t) * est.dof[i0] + t * est.dof[i0 + 1];
  }
  return out;
}

std::vector<double> empirical_bias(const std::vector<SpectralEstimate>& estimates,
                                   const SpectralEstimate& reference) {
  if (estimates.empty()) throw ParameterError("empirical_bias: no estimates");
  const std::size_t m = reference.grid.size;
  for (const auto& e : estimates)
    if (e.grid != reference.grid) throw ParameterError("empirical_bias: grid mismatch");
  std::vector<double> bias(m, 0.0);
  for (const auto& e : estimates)
    for (std::size_t j = 0; j < m; ++j) bias[j] += e.values[j];
  const double inv = 1.0 / static_cast<double>(estimates.size());
  for (std::size_t j = 0; j < m; ++j) bias[j] = bias[j] * inv - reference.values[j];
  return bias;
}

std::vector<double> empirical_variance(const std::vector<SpectralEstimate>& estimates) {
  const std::size_t ns = estimates.size();
  if (ns < 3) throw ParameterError("empirical_variance: need at least 3 segments");
  const std::size_t m = estimates.front().grid.size;
  for (const auto& e : estimates)
    if (e.grid != estimates.front().grid)
      throw ParameterError("empirical_variance: grid mismatch");
  std::vector<double> var(m, 0.0);
  for (std::size_t i = 1; i + 1 < ns; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = estimates[i].values[j] -
                       0.5 * (estimates[i - 1].values[j] + estimates[i + 1].values[j]);
      var[j] += d * d;
    }
  }
  const double scale = 2.0 / (3.0 * static_cast<double>(ns - 2));
  for (double& v : var) v *= scale;
  return var;
}

std::vector<Band> default_bands() {
  // [200,900], [1100,1900], [2100,2400] kHz at a 5 MHz sampling rate.
  return {{0.04, 0.18}, {0.22, 0.38}, {0.42, 0.48}};
}

BandScores band_scores(const std::vector<double>& rmse, const FrequencyGrid& grid,
                       const std::vector<Band>& bands) {
  if (rmse.size() != grid.size) throw ParameterError("band_scores: size mismatch");
  if (bands.empty()) throw ParameterError("band_scores: no bands");
  BandScores out;
  std::vector<std::uint8_t> in_union(grid.size, 0);
  for (const auto& band : bands) {
    if (!(band.lo <= band.hi) || band.lo < 0.0 || band.hi > 0.5)
      throw ParameterError("band_scores: band outside [0, 1/2]");
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < grid.size; ++j) {
      const double f = grid.frequency(j);
      if (f >= band.lo && f <= band.hi) {
        acc += rmse[j];
        ++count;
        in_union[j] = 1;
      }
    }
    if (count == 0) throw ParameterError("band_scores: band contains no grid points");
    out.per_band.push_back(acc / static_cast<double>(count));
  }
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.size; ++j) {
    if (in_union[j]) {
      acc += rmse[j];
      ++count;
    }
  }
  out.combined = acc / static_cast<double>(count);
  return out;
}

namespace {

TimeSeries slice(const TimeSeries& x, std::size_t start, std::size_t len) {
  return TimeSeries(std::vector<double>(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                                        x.samples.begin() + static_cast<std::ptrdiff_t>(start + len)),
                    x.dt);
}

Taper make_sp_taper(const MethodSpec& spec, std::size_t n) {
  if (spec.taper == "rect") return rectangular_taper(n);
  if (spec.taper == "tukey") return build_tukey_taper(n, spec.tukey_alpha_n);
  if (spec.taper == "slepian")
    return build_slepian_family(n, spec.slepian_nw, 1).tapers.front();
  throw ParameterError("unknown smoothed-periodogram taper '" + spec.taper + "'");
}

// Per-segment estimates that depend only on the segment, not on W: raw
// tapered periodograms for smoothed periodograms, combined multitapers for
// hybrids, full Welch estimates.
std::vector<SpectralEstimate> base_estimates(const MethodSpec& spec, const TimeSeries& record,
                                             const SegmentPlan& plan, std::size_t grid_size) {
  std::vector<SpectralEstimate> out;
  out.reserve(plan.count);
  switch (spec.kind) {
    case MethodKind::smoothed_periodogram: {
      const Taper taper = make_sp_taper(spec, plan.segment_len);
      for (std::size_t s : plan.starts)
        out.push_back(tapered_periodogram(slice(record, s, plan.segment_len), taper, grid_size));
      break;
    }
    case MethodKind::hybrid: {
      const SlepianFamily fam =
          build_slepian_family(plan.segment_len, spec.hybrid_nw, spec.hybrid_k);
      for (std::size_t s : plan.starts) {
        const TimeSeries seg = slice(record, s, plan.segment_len);
        const EigenSpectra es = eigencoefficients(seg, fam, grid_size);
        WeightingScheme scheme;
        scheme.kind = spec.weighting;
        scheme.sigma2 = seg.mean_power();
        SpectralEstimate est = adaptive_combine(es, scheme).second;
        est.method.n_samples = seg.size();
        est.method.time_bandwidth = fam.time_bandwidth;
        out.push_back(std::move(est));
      }
      break;
    }
    case MethodKind::welch: {
      if (spec.welch_divide < 1 ||
          plan.segment_len % static_cast<std::size_t>(spec.welch_divide) != 0)
        throw ParameterError("welch: segment length must divide evenly");
      const std::size_t sub = plan.segment_len / static_cast<std::size_t>(spec.welch_divide);
      const Taper taper = build_slepian_family(sub, spec.welch_nw, 1).tapers.front();
      for (std::size_t s : plan.starts)
        out.push_back(
            welch_estimate(slice(record, s, plan.segment_len), sub, 0.0, taper, grid_size));
      break;
    }
    case MethodKind::multitaper:
      throw ParameterError("multitaper estimates depend on W; no base estimates");
  }
  return out;
}

std::vector<SpectralEstimate> multitaper_estimates(const MethodSpec& spec,
                                                   const TimeSeries& record,
                                                   const SegmentPlan& plan, double bandwidth,
                                                   std::size_t grid_size) {
  const double nw = bandwidth * static_cast<double>(plan.segment_len);
  int k = spec.k_override > 0 ? spec.k_override : default_taper_count(nw);
  if (spec.weighting == WeightingKind::sequential_deselection) k = std::max(k, 3);
  const SlepianFamily fam = build_slepian_family(plan.segment_len, nw, k);
  std::vector<SpectralEstimate> out;
  out.reserve(plan.count);
  for (std::size_t s : plan.starts) {
    const TimeSeries seg = slice(record, s, plan.segment_len);
    const EigenSpectra es = eigencoefficients(seg, fam, grid_size);
    WeightingScheme scheme;
    scheme.kind = spec.weighting;
    scheme.sigma2 = seg.mean_power();
    SpectralEstimate est = adaptive_combine(es, scheme).second;
    est.method.n_samples = seg.size();
    est.method.time_bandwidth = nw;
    out.push_back(std::move(est));
  }
  return out;
}

std::vector<double> relative_rmse(const std::vector<double>& bias,
                                  const std::vector<double>& variance,
                                  const SpectralEstimate& reference) {
  std::vector<double> rmse(bias.size());
  for (std::size_t j = 0; j < bias.size(); ++j)
    rmse[j] = std::sqrt(variance[j] + bias[j] * bias[j]) / reference.values[j];
  return rmse;
}

}  // namespace

MethodResult optimize_bandwidth(const MethodSpec& spec, const TimeSeries& record,
                                const SegmentPlan& bias_plan, const SegmentPlan& var_plan,
                                const SpectralEstimate& reference,
                                const std::vector<Band>& bands, std::size_t grid_size) {
  if (spec.w_grid.empty()) throw ParameterError("optimize_bandwidth: empty bandwidth grid");
  if (!std::is_sorted(spec.w_grid.begin(), spec.w_grid.end()))
    throw ParameterError("optimize_bandwidth: bandwidth grid must be sorted");

  MethodResult result;
  result.spec = spec;

  std::vector<SpectralEstimate> base_ov, base_no;
  if (spec.kind != MethodKind::multitaper) {
    base_ov = base_estimates(spec, record, bias_plan, grid_size);
    base_no = base_estimates(spec, record, var_plan, grid_size);
  }

  std::vector<std::vector<double>> all_bias, all_var, all_rmse;
  for (double w : spec.w_grid) {
    std::vector<SpectralEstimate> est_ov, est_no;
    if (spec.kind == MethodKind::multitaper) {
      est_ov = multitaper_estimates(spec, record, bias_plan, w, grid_size);
      est_no = multitaper_estimates(spec, record, var_plan, w, grid_size);
    } else if (spec.kind == MethodKind::welch) {
      est_ov = base_ov;
      est_no = base_no;
    } else {
      const double df = FrequencyGrid(base_ov.front().grid.size).spacing();
      est_ov.reserve(base_ov.size());
      est_no.reserve(base_no.size());
      for (const auto& e : base_ov) est_ov.push_back(w >= df ? boxcar_smooth(e, w) : e);
      for (const auto& e : base_no) est_no.push_back(w >= df ? boxcar_smooth(e, w) : e);
    }
    std::vector<double> bias = empirical_bias(est_ov, reference);
    std::vector<double> variance = empirical_variance(est_no);
    std::vector<double> rmse = relative_rmse(bias, variance, reference);
    const BandScores scores = band_scores(rmse, reference.grid, bands);
    result.scores.push_back(scores.combined);
    result.band_details.push_back(scores);
    all_bias.push_back(std::move(bias));
    all_var.push_back(std::move(variance));
    all_rmse.push_back(std::move(rmse));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.scores.size(); ++i)
    if (result.scores[i] < result.scores[best]) best = i;  // ties keep the smaller W
  result.optimal_index = best;
  result.optimal_w = spec.w_grid[best];
  result.optimal_score = result.scores[best];
  result.optimum_at_edge =
      spec.w_grid.size() > 1 && (best == 0 || best + 1 == spec.w_grid.size());
  result.bias = std::move(all_bias[best]);
  result.variance = std::move(all_var[best]);
  result.rmse = std::move(all_rmse[best]);
  return result;
}

CompareConfig CompareConfig::paper_defaults() {
  CompareConfig cfg;
  const double n = static_cast<double>(cfg.segment_len);
  const std::vector<double> kernel_grid = {0.004, 0.006, 0.008, 0.010,
                                           0.012, 0.014, 0.018, 0.024};
  std::vector<double> taper_grid;
  for (double nw : {2.46, 3.0, 3.46, 4.0, 4.46, 5.46, 6.5}) taper_grid.push_back(nw / n);

  MethodSpec sp_rect{.name = "sp-rect", .kind = MethodKind::smoothed_periodogram,
                     .w_grid = kernel_grid, .taper = "rect"};
  MethodSpec sp_tukey{.name = "sp-tukey", .kind = MethodKind::smoothed_periodogram,
                      .w_grid = kernel_grid, .taper = "tukey", .tukey_alpha_n = 33.0};
  MethodSpec sp_slepian{.name = "sp-slepian", .kind = MethodKind::smoothed_periodogram,
                        .w_grid = kernel_grid, .taper = "slepian", .slepian_nw = 1.0};

  auto mt = [&](const char* name, WeightingKind w) {
    MethodSpec m;
    m.name = name;
    m.kind = MethodKind::multitaper;
    m.w_grid = taper_grid;
    m.weighting = w;
    return m;
  };

  MethodSpec hybrid{.name = "hybrid", .kind = MethodKind::hybrid, .w_grid = kernel_grid,
                    .weighting = WeightingKind::sequential_deselection,
                    .hybrid_nw = 2.46, .hybrid_k = 4};

  MethodSpec welch{.name = "welch", .kind = MethodKind::welch, .w_grid = {0.0},
                   .welch_divide = 2, .welch_nw = 1.0};
  // Matched degrees of freedom and physical bandwidth for the Welch
  // comparison: two tapered half-length segments vs. two tapers on the whole.
  MethodSpec mt_k2{.name = "mt-k2", .kind = MethodKind::multitaper, .w_grid = {2.0 / n},
                   .weighting = WeightingKind::uniform, .k_override = 2};

  cfg.methods = {sp_rect,
                 sp_tukey,
                 sp_slepian,
                 mt("mt-uniform", WeightingKind::uniform),
                 mt("mt-seqdesel", WeightingKind::sequential_deselection),
                 mt("mt-minloss", WeightingKind::minimal_loss),
                 mt("mt-wiener", WeightingKind::wiener),
                 hybrid,
                 welch,
                 mt_k2};
  return cfg;
}

ComparisonReport compare_methods(const CompareConfig& config) {
  const TimeSeries record = config.use_external_series
                                ? config.series
                                : generate(config.model, config.record_len, config.seed);

  const SegmentPlan bias_plan =
      plan_segments(record.size(), config.segment_len, config.bias_overlap);
  const SegmentPlan var_plan = plan_segments(record.size(), config.segment_len, 0.0);

  const SpectralEstimate full_reference = converged_reference(
      record, config.reference_bandwidth, config.reference_weighting, config.reference_grid);
  const std::size_t m = effective_grid_size(config.segment_len, config.grid_size);
  const SpectralEstimate reference = resample_log(full_reference, FrequencyGrid(m));

  ComparisonReport report;
  report.grid = reference.grid;
  report.reference = reference;
  report.bands = config.bands;
  report.seed = config.seed;
  report.model_name = config.use_external_series ? "external" : config.model.name();
  for (const MethodSpec& spec : config.methods) {
    try {
      report.methods.push_back(optimize_bandwidth(spec, record, bias_plan, var_plan, reference,
                                                  config.bands, config.grid_size));
    } catch (const std::exception& e) {
      MethodResult failed;
      failed.spec = spec;
      failed.failed = true;
      failed.error = e.what();
      report.methods.push_back(std::move(failed));
    }
  }
  return report;
}

}  // namespace mtspec
