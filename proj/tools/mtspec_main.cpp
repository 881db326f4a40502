// Command-line front end: taper export, estimation runs, jackknife bands,
// synthetic generation, comparison campaigns, and table reproduction.
// Every run writes a manifest echoing its resolved parameters; `rerun`
// reproduces a run from the manifest alone.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mtspec/estimators.hpp"
#include "mtspec/harness.hpp"
#include "mtspec/io.hpp"
#include "mtspec/jackknife.hpp"
#include "mtspec/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mtspec;

namespace {

constexpr const char* kToolVersion = "1.0.0";

void write_manifest(const fs::path& outdir, const std::string& command, const json& params) {
  json m;
  m["tool"] = "mtspec";
  m["version"] = kToolVersion;
  m["rng"] = kRngVersion;
  m["command"] = command;
  m["params"] = params;
  fs::create_directories(outdir);
  std::ofstream out(outdir / "manifest.json");
  out << m.dump(2) << "\n";
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

// "f:w:h,f:w:h" -> peaks
std::vector<SpectralPeak> parse_peaks(const std::string& text) {
  std::vector<SpectralPeak> peaks;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    SpectralPeak p;
    if (std::sscanf(tok.c_str(), "%lf:%lf:%lf", &p.frequency, &p.width, &p.height) != 3)
      throw ParameterError("bad peak spec '" + tok + "', expected f:w:h");
    peaks.push_back(p);
  }
  return peaks;
}

std::vector<Band> parse_bands(const std::string& text, double scale = 1.0) {
  std::vector<Band> bands;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    Band b;
    if (std::sscanf(tok.c_str(), "%lf:%lf", &b.lo, &b.hi) != 2)
      throw ParameterError("bad band spec '" + tok + "', expected lo:hi");
    b.lo *= scale;
    b.hi *= scale;
    bands.push_back(b);
  }
  return bands;
}

SpectrumModel model_from_params(const json& p) {
  const std::string name = p.value("model", "white");
  if (name == "white") return SpectrumModel::white(p.value("sigma2", 1.0));
  if (name == "ar")
    return SpectrumModel::autoregressive(parse_double_list(p.value("ar_coeffs", std::string())),
                                         p.value("ar_innovation_variance", 1.0));
  if (name == "tftr_like" || name == "tftr") {
    SpectrumModel m = SpectrumModel::tftr_like();
    m.floor_level = p.value("floor", m.floor_level);
    m.decay_rate = p.value("decay_rate", m.decay_rate);
    m.decay_base = p.value("decay_base", m.decay_base);
    if (p.contains("peaks")) m.peaks = parse_peaks(p["peaks"].get<std::string>());
    return m;
  }
  if (name == "tabulated") {
    const std::string path = p.value("table", std::string());
    if (path.empty()) throw ParameterError("tabulated model needs table=<csv of f,value>");
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open " + path);
    std::vector<double> fs_, vs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      double f = 0, v = 0;
      if (std::sscanf(line.c_str(), "%lf,%lf", &f, &v) != 2)
        throw ParameterError(path + ": expected 'frequency,value' lines");
      fs_.push_back(f);
      vs.push_back(v);
    }
    return SpectrumModel::tabulated(std::move(fs_), std::move(vs));
  }
  throw ParameterError("unknown model '" + name + "'");
}

TimeSeries load_series(const json& p) {
  const std::string path = p.value("input", std::string());
  if (path.empty()) throw ParameterError("missing input path");
  const std::string format = p.value("format", "csv");
  if (format == "raw") return io::read_series_raw(path);
  if (format == "csv") {
    double dt = p.value("dt", 0.0);
    if (dt <= 0.0) {
      const double sr = p.value("sample_rate_hz", 0.0);
      dt = sr > 0.0 ? 1.0 / sr : 1.0;
    }
    return io::read_series_csv(path, dt);
  }
  throw ParameterError("unknown input format '" + format + "'");
}

// ---- subcommand bodies, each driven by a resolved parameter object ----

void run_synth(const json& p, const fs::path& outdir) {
  const SpectrumModel model = model_from_params(p);
  const std::size_t n = p.at("n").get<std::size_t>();
  const std::uint64_t seed = p.value("seed", 0ULL);
  TimeSeries x = generate(model, n, seed);
  const double sr = p.value("sample_rate_hz", 0.0);
  if (sr > 0.0) x.dt = 1.0 / sr;
  const std::string format = p.value("format", "csv");
  fs::create_directories(outdir);
  if (format == "raw")
    io::write_series_raw(outdir / "series.raw", x);
  else
    io::write_series_csv(outdir / "series.csv", x);
  write_manifest(outdir, "synth", p);
}

void run_tapers(const json& p, const fs::path& outdir) {
  const std::string type = p.value("type", "slepian");
  const std::size_t n = p.at("n").get<std::size_t>();
  fs::create_directories(outdir);
  const std::size_t window_grid = p.value("window_grid", 0ULL);
  std::vector<Taper> tapers;
  if (type == "slepian") {
    const double nw = p.at("nw").get<double>();
    const int k = p.value("k", default_taper_count(nw));
    const SlepianFamily fam = build_slepian_family(n, nw, k);
    std::ofstream ev(outdir / "eigenvalues.csv");
    ev << "k,lambda,one_minus_lambda\n";
    for (int kk = 0; kk < fam.K; ++kk)
      ev << kk << ',' << io::format_double(fam.eigenvalues[kk]) << ','
         << io::format_double(1.0 - fam.eigenvalues[kk]) << '\n';
    tapers = fam.tapers;
  } else if (type == "tukey") {
    tapers.push_back(build_tukey_taper(n, p.at("alphan").get<double>()));
  } else if (type == "rect") {
    tapers.push_back(rectangular_taper(n));
  } else {
    throw ParameterError("unknown taper type '" + type + "'");
  }
  for (std::size_t k = 0; k < tapers.size(); ++k) {
    io::write_taper_csv(outdir / ("taper-" + std::to_string(k) + ".csv"), tapers[k]);
    if (window_grid >= n) {
      const SpectralWindow win = spectral_window(tapers[k], window_grid);
      std::ofstream out(outdir / ("window-" + std::to_string(k) + ".csv"));
      out << "frequency,re,im\n";
      for (std::size_t g = 0; g < win.frequencies.size(); ++g)
        out << io::format_double(win.frequencies[g]) << ','
            << io::format_double(win.values[g].real()) << ','
            << io::format_double(win.values[g].imag()) << '\n';
    }
  }
  write_manifest(outdir, "tapers", p);
}

void run_estimate(const json& p, const fs::path& outdir) {
  const TimeSeries x = load_series(p);
  const std::string method = p.value("method", "periodogram");
  const std::size_t grid = p.value("grid", 0ULL) > 0 ? p["grid"].get<std::size_t>() : x.size();
  fs::create_directories(outdir);

  auto sp_taper = [&]() -> Taper {
    const std::string taper = p.value("taper", "rect");
    if (taper == "rect") return rectangular_taper(x.size());
    if (taper == "tukey") return build_tukey_taper(x.size(), p.value("alphan", 33.0));
    if (taper == "slepian")
      return build_slepian_family(x.size(), p.value("taper_nw", 1.0), 1).tapers.front();
    throw ParameterError("unknown taper '" + taper + "'");
  };

  SpectralEstimate est;
  bool have_weights = false;
  WeightField weights;
  if (method == "periodogram") {
    est = periodogram(x, grid);
  } else if (method == "tapered") {
    est = tapered_periodogram(x, sp_taper(), grid);
  } else if (method == "smoothed") {
    est = boxcar_smooth(tapered_periodogram(x, sp_taper(), grid), p.at("kernel_w").get<double>());
  } else if (method == "multitaper" || method == "hybrid") {
    const double nw = p.at("nw").get<double>();
    const int k = p.value("k", default_taper_count(nw));
    const SlepianFamily fam = build_slepian_family(x.size(), nw, k);
    WeightingScheme scheme;
    scheme.kind = weighting_from_name(p.value("weighting", "uniform"));
    scheme.alpha_k = p.value("alpha_k", 2.0);
    scheme.max_delete_fraction = p.value("max_delete_fraction", 0.20);
    scheme.sigma2 = x.mean_power();
    const EigenSpectra es = eigencoefficients(x, fam, grid);
    auto [wf, combined] = adaptive_combine(es, scheme);
    est = std::move(combined);
    est.method.n_samples = x.size();
    est.method.time_bandwidth = nw;
    weights = std::move(wf);
    have_weights = true;
    if (method == "hybrid") {
      const double kw = p.at("kernel_w").get<double>();
      if (kw >= est.grid.spacing()) est = boxcar_smooth(est, kw);
      est.method.estimator = "hybrid";
    }
  } else if (method == "welch") {
    const std::size_t seg = p.at("segment_len").get<std::size_t>();
    const double overlap = p.value("overlap", 0.0);
    const std::string taper = p.value("taper", "slepian");
    Taper t = taper == "rect"    ? rectangular_taper(seg)
              : taper == "tukey" ? build_tukey_taper(seg, p.value("alphan", 33.0))
                                 : build_slepian_family(seg, p.value("taper_nw", 1.0), 1)
                                       .tapers.front();
    est = welch_estimate(x, seg, overlap, t, std::max(grid, 4 * seg));
  } else {
    throw ParameterError("unknown method '" + method + "'");
  }

  io::write_estimate_csv(outdir / "estimate.csv", est, x.dt);
  if (have_weights) io::write_weights_csv(outdir / "weights.csv", weights, x.dt);
  write_manifest(outdir, "estimate", p);
}

void run_jackknife(const json& p, const fs::path& outdir) {
  const TimeSeries x = load_series(p);
  const double nw = p.at("nw").get<double>();
  const int k = p.value("k", default_taper_count(nw));
  const std::size_t grid = p.value("grid", 0ULL) > 0 ? p["grid"].get<std::size_t>() : x.size();
  const double n_sigma = p.value("nsigma", 2.0);

  const SlepianFamily fam = build_slepian_family(x.size(), nw, k);
  const EigenSpectra es = eigencoefficients(x, fam, grid);
  WeightingScheme scheme;
  scheme.kind = weighting_from_name(p.value("weighting", "uniform"));
  scheme.sigma2 = x.mean_power();
  SpectralEstimate est = adaptive_combine(es, scheme).second;
  est.method.n_samples = x.size();
  est.method.time_bandwidth = nw;

  // The variance always comes from the uniformly weighted powers; the
  // weighting choice only moves the point estimate.
  const LogSpectrumStats stats = log_estimates(es);
  fs::create_directories(outdir);
  io::write_estimate_csv(outdir / "estimate.csv",
                         confidence_band(est, stats, n_sigma, BandKind::jackknife), x.dt);
  if (p.value("gaussian_band", false))
    io::write_estimate_csv(outdir / "estimate-gaussian.csv",
                           confidence_band(est, stats, n_sigma, BandKind::gaussian), x.dt);
  write_manifest(outdir, "jackknife", p);
}

void run_tables(const json& p, const fs::path& outdir) {
  const int table = p.at("table").get<int>();
  fs::create_directories(outdir);
  if (table == 3) {
    const std::size_t n = p.value("n", 300ULL);
    const double nw = p.value("nw", 5.46);
    const int k = p.value("k", 10);
    const SlepianFamily fam = build_slepian_family(n, nw, k);
    std::ofstream out(outdir / "table3.csv");
    out << "k,lambda,one_minus_lambda\n";
    for (int kk = 0; kk < fam.K; ++kk)
      out << kk << ',' << io::format_double(fam.eigenvalues[kk]) << ','
          << io::format_double(1.0 - fam.eigenvalues[kk]) << '\n';
  } else if (table == 4) {
    std::ofstream out(outdir / "table4.csv");
    out << "K,bias,trigamma,jack_expect,jack_asymptotic,meanlog_variance,ratio\n";
    char buf[160];
    for (int k = 3; k <= 20; ++k) {
      const Chi2LogMoments mo = chi2_log_moments(k);
      std::snprintf(buf, sizeof(buf), "%d,%.5f,%.5f,%.5f,%.5f,%.5f,%.5f\n", k, mo.bias,
                    mo.variance, mo.jack_expect, mo.jack_asymptotic, mo.meanlog_variance,
                    mo.meanlog_variance / mo.jack_expect);
      out << buf;
    }
  } else {
    throw ParameterError("only tables 3 and 4 are reproducible");
  }
  write_manifest(outdir, "tables", p);
}

CompareConfig compare_config_from_params(const json& p) {
  CompareConfig cfg = CompareConfig::paper_defaults();
  cfg.record_len = p.value("record_len", cfg.record_len);
  cfg.seed = p.value("seed", cfg.seed);
  cfg.segment_len = p.value("segment_len", cfg.segment_len);
  cfg.bias_overlap = p.value("bias_overlap", cfg.bias_overlap);
  cfg.grid_size = p.value("grid_size", cfg.grid_size);
  cfg.reference_grid = p.value("reference_grid", cfg.reference_grid);
  if (p.contains("reference_nw"))
    cfg.reference_bandwidth =
        p["reference_nw"].get<double>() / static_cast<double>(cfg.record_len);
  if (p.contains("reference_weighting"))
    cfg.reference_weighting = weighting_from_name(p["reference_weighting"].get<std::string>());
  cfg.model = model_from_params(p);
  if (p.contains("input")) {
    cfg.use_external_series = true;
    cfg.series = load_series(p);
    cfg.record_len = cfg.series.size();
  }
  if (p.contains("bands")) {
    cfg.bands = parse_bands(p["bands"].get<std::string>());
  } else if (p.contains("bands_hz")) {
    const double sr = p.value("sample_rate_hz", 0.0);
    if (!(sr > 0.0)) throw ParameterError("bands_hz needs sample_rate_hz");
    cfg.bands = parse_bands(p["bands_hz"].get<std::string>(), 1.0 / sr);
  }
  if (p.contains("methods")) {
    std::vector<MethodSpec> keep;
    std::stringstream ss(p["methods"].get<std::string>());
    std::string name;
    while (std::getline(ss, name, ',')) {
      bool found = false;
      for (const auto& m : cfg.methods)
        if (m.name == name) {
          keep.push_back(m);
          found = true;
        }
      if (!found) throw ParameterError("unknown method '" + name + "'");
    }
    cfg.methods = std::move(keep);
  }
  return cfg;
}

void run_compare(const json& p, const fs::path& outdir) {
  const CompareConfig cfg = compare_config_from_params(p);
  if (cfg.bias_overlap != 0.0 && cfg.bias_overlap != 0.5)
    std::cerr << "warning: overlap " << cfg.bias_overlap << " is outside {0, 0.5}\n";
  const ComparisonReport report = compare_methods(cfg);
  double dt = 1.0;
  if (p.value("sample_rate_hz", 0.0) > 0.0) dt = 1.0 / p["sample_rate_hz"].get<double>();
  io::write_report(outdir, report, dt);
  write_manifest(outdir, "compare", p);
  for (const MethodResult& r : report.methods) {
    if (r.failed)
      std::cerr << "method " << r.spec.name << " failed: " << r.error << "\n";
    else
      std::cout << r.spec.name << ": optimal W " << r.optimal_w << " score " << r.optimal_score
                << (r.optimum_at_edge ? " (at grid edge)" : "") << "\n";
  }
}

json params_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path);
  json p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    // Numeric-looking values become numbers so they round-trip via JSON.
    char* end = nullptr;
    const double num = std::strtod(value.c_str(), &end);
    if (end && *end == '\0' && end != value.c_str()) {
      if (num == std::floor(num) && std::abs(num) < 9e15 &&
          value.find_first_of(".eE") == std::string::npos)
        p[key] = static_cast<long long>(num);
      else
        p[key] = num;
    } else {
      p[key] = value;
    }
  }
  return p;
}

void dispatch(const std::string& command, const json& params, const fs::path& outdir) {
  if (command == "synth") run_synth(params, outdir);
  else if (command == "tapers") run_tapers(params, outdir);
  else if (command == "estimate") run_estimate(params, outdir);
  else if (command == "jackknife") run_jackknife(params, outdir);
  else if (command == "tables") run_tables(params, outdir);
  else if (command == "compare") run_compare(params, outdir);
  else throw ParameterError("unknown command '" + command + "' in manifest");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mtspec: multitaper and smoothed-periodogram spectral estimation"};
  app.require_subcommand(1);

  std::string outdir = ".";
  app.add_option("--out", outdir, "output directory")->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic series");
  std::string sy_model = "white", sy_ar, sy_peaks, sy_format = "csv", sy_table;
  std::size_t sy_n = 1024;
  std::uint64_t sy_seed = 0;
  double sy_sigma2 = 1.0, sy_innov = 1.0, sy_floor = -1, sy_rate = -1, sy_base = -1, sy_sr = 0;
  synth_cmd->add_option("--model", sy_model, "white|ar|tftr_like|tabulated");
  synth_cmd->add_option("--n", sy_n, "sample count")->required();
  synth_cmd->add_option("--seed", sy_seed, "rng seed");
  synth_cmd->add_option("--sigma2", sy_sigma2, "white-noise variance");
  synth_cmd->add_option("--ar", sy_ar, "AR coefficients a1,a2,...");
  synth_cmd->add_option("--innov", sy_innov, "AR innovation variance");
  synth_cmd->add_option("--floor", sy_floor, "tftr_like floor");
  synth_cmd->add_option("--decay-rate", sy_rate, "tftr_like decay rate");
  synth_cmd->add_option("--decay-base", sy_base, "tftr_like decay base");
  synth_cmd->add_option("--peaks", sy_peaks, "tftr_like peaks f:w:h,...");
  synth_cmd->add_option("--table", sy_table, "tabulated model csv (frequency,value)");
  synth_cmd->add_option("--format", sy_format, "csv|raw");
  synth_cmd->add_option("--sample-rate-hz", sy_sr, "physical sample rate");

  auto* tapers_cmd = app.add_subcommand("tapers", "construct and export tapers");
  std::string tp_type = "slepian";
  std::size_t tp_n = 0, tp_grid = 0;
  double tp_nw = 4.0, tp_alphan = 33.0;
  int tp_k = 0;
  tapers_cmd->add_option("--type", tp_type, "slepian|tukey|rect");
  tapers_cmd->add_option("--n", tp_n, "taper length")->required();
  tapers_cmd->add_option("--nw", tp_nw, "time-bandwidth product (slepian)");
  tapers_cmd->add_option("--k", tp_k, "taper count (slepian; default round(2*NW))");
  tapers_cmd->add_option("--alphan", tp_alphan, "alpha*N (tukey)");
  tapers_cmd->add_option("--window-grid", tp_grid, "also export spectral windows on this grid");

  auto* est_cmd = app.add_subcommand("estimate", "spectral estimate of a series");
  std::string es_input, es_format = "csv", es_method = "periodogram", es_taper = "rect",
              es_weighting = "uniform";
  std::size_t es_grid = 0, es_seglen = 0;
  double es_dt = 0, es_sr = 0, es_alphan = 33.0, es_tnw = 1.0, es_nw = 4.0, es_kw = 0,
         es_overlap = 0, es_alpha_k = 2.0, es_maxdel = 0.2;
  int es_k = 0;
  est_cmd->add_option("--input", es_input, "series file")->required();
  est_cmd->add_option("--format", es_format, "csv|raw");
  est_cmd->add_option("--dt", es_dt, "sample interval (csv input)");
  est_cmd->add_option("--sample-rate-hz", es_sr, "sample rate (csv input)");
  est_cmd->add_option("--method", es_method,
                      "periodogram|tapered|smoothed|multitaper|hybrid|welch");
  est_cmd->add_option("--taper", es_taper, "rect|tukey|slepian");
  est_cmd->add_option("--alphan", es_alphan, "tukey alpha*N");
  est_cmd->add_option("--taper-nw", es_tnw, "slepian NW for single-taper methods");
  est_cmd->add_option("--nw", es_nw, "family time-bandwidth (multitaper/hybrid)");
  est_cmd->add_option("--k", es_k, "taper count (default round(2*NW))");
  est_cmd->add_option("--weighting", es_weighting, "uniform|seqdesel|minloss|wiener");
  est_cmd->add_option("--alpha-k", es_alpha_k, "deselection threshold");
  est_cmd->add_option("--max-delete-fraction", es_maxdel, "deselection budget");
  est_cmd->add_option("--kernel-w", es_kw, "boxcar halfwidth, cycles/sample");
  est_cmd->add_option("--segment-len", es_seglen, "welch segment length");
  est_cmd->add_option("--overlap", es_overlap, "welch overlap fraction");
  est_cmd->add_option("--grid", es_grid, "one-sided grid size (default 4N)");

  auto* jk_cmd = app.add_subcommand("jackknife", "multitaper estimate with confidence band");
  std::string jk_input, jk_format = "csv", jk_weighting = "uniform";
  std::size_t jk_grid = 0;
  double jk_dt = 0, jk_sr = 0, jk_nw = 4.0, jk_nsigma = 2.0;
  int jk_k = 0;
  bool jk_gauss = false;
  jk_cmd->add_option("--input", jk_input, "series file")->required();
  jk_cmd->add_option("--format", jk_format, "csv|raw");
  jk_cmd->add_option("--dt", jk_dt, "sample interval (csv input)");
  jk_cmd->add_option("--sample-rate-hz", jk_sr, "sample rate (csv input)");
  jk_cmd->add_option("--nw", jk_nw, "family time-bandwidth");
  jk_cmd->add_option("--k", jk_k, "taper count (default round(2*NW))");
  jk_cmd->add_option("--weighting", jk_weighting, "point-estimate weighting");
  jk_cmd->add_option("--nsigma", jk_nsigma, "band half-width in sigmas");
  jk_cmd->add_flag("--gaussian-band", jk_gauss, "also emit the Gaussian-theory band");
  jk_cmd->add_option("--grid", jk_grid, "one-sided grid size (default 4N)");

  auto* tab_cmd = app.add_subcommand("tables", "reproduce the published tables");
  int tb_table = 4, tb_k = 10;
  std::size_t tb_n = 300;
  double tb_nw = 5.46;
  tab_cmd->add_option("--table", tb_table, "3 or 4")->required();
  tab_cmd->add_option("--n", tb_n, "taper length (table 3)");
  tab_cmd->add_option("--nw", tb_nw, "time-bandwidth (table 3)");
  tab_cmd->add_option("--k", tb_k, "taper count (table 3)");

  auto* cmp_cmd = app.add_subcommand("compare", "cross-method RMSE comparison");
  std::string cm_config, cm_methods, cm_bands, cm_input;
  std::size_t cm_record = 0, cm_seglen = 0;
  long long cm_seed = -1;
  cmp_cmd->add_option("--config", cm_config, "key=value configuration file");
  cmp_cmd->add_option("--methods", cm_methods, "comma-separated subset of the default set");
  cmp_cmd->add_option("--bands", cm_bands, "lo:hi,... in cycles/sample");
  cmp_cmd->add_option("--record-len", cm_record, "synthetic record length");
  cmp_cmd->add_option("--segment-len", cm_seglen, "comparison segment length");
  cmp_cmd->add_option("--seed", cm_seed, "rng seed");
  cmp_cmd->add_option("--input", cm_input, "external series instead of the synthetic model");

  auto* rerun_cmd = app.add_subcommand("rerun", "repeat a run from its manifest");
  std::string rr_manifest;
  rerun_cmd->add_option("--manifest", rr_manifest, "path to manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (synth_cmd->parsed()) {
      json p;
      p["model"] = sy_model;
      p["n"] = sy_n;
      p["seed"] = sy_seed;
      if (sy_model == "white") p["sigma2"] = sy_sigma2;
      if (!sy_ar.empty()) p["ar_coeffs"] = sy_ar;
      if (sy_model == "ar") p["ar_innovation_variance"] = sy_innov;
      if (sy_floor >= 0) p["floor"] = sy_floor;
      if (sy_rate >= 0) p["decay_rate"] = sy_rate;
      if (sy_base >= 0) p["decay_base"] = sy_base;
      if (!sy_peaks.empty()) p["peaks"] = sy_peaks;
      if (!sy_table.empty()) p["table"] = sy_table;
      p["format"] = sy_format;
      if (sy_sr > 0) p["sample_rate_hz"] = sy_sr;
      run_synth(p, outdir);
    } else if (tapers_cmd->parsed()) {
      json p;
      p["type"] = tp_type;
      p["n"] = tp_n;
      if (tp_type == "slepian") {
        p["nw"] = tp_nw;
        p["k"] = tp_k > 0 ? tp_k : default_taper_count(tp_nw);
      }
      if (tp_type == "tukey") p["alphan"] = tp_alphan;
      if (tp_grid > 0) p["window_grid"] = tp_grid;
      run_tapers(p, outdir);
    } else if (est_cmd->parsed()) {
      json p;
      p["input"] = es_input;
      p["format"] = es_format;
      if (es_dt > 0) p["dt"] = es_dt;
      if (es_sr > 0) p["sample_rate_hz"] = es_sr;
      p["method"] = es_method;
      p["taper"] = es_taper;
      p["alphan"] = es_alphan;
      p["taper_nw"] = es_tnw;
      if (es_method == "multitaper" || es_method == "hybrid") {
        p["nw"] = es_nw;
        if (es_k > 0) p["k"] = es_k;
        p["weighting"] = es_weighting;
        p["alpha_k"] = es_alpha_k;
        p["max_delete_fraction"] = es_maxdel;
      }
      if (es_kw > 0) p["kernel_w"] = es_kw;
      if (es_seglen > 0) p["segment_len"] = es_seglen;
      if (es_overlap > 0) p["overlap"] = es_overlap;
      if (es_grid > 0) p["grid"] = es_grid;
      run_estimate(p, outdir);
    } else if (jk_cmd->parsed()) {
      json p;
      p["input"] = jk_input;
      p["format"] = jk_format;
      if (jk_dt > 0) p["dt"] = jk_dt;
      if (jk_sr > 0) p["sample_rate_hz"] = jk_sr;
      p["nw"] = jk_nw;
      if (jk_k > 0) p["k"] = jk_k;
      p["weighting"] = jk_weighting;
      p["nsigma"] = jk_nsigma;
      if (jk_gauss) p["gaussian_band"] = true;
      if (jk_grid > 0) p["grid"] = jk_grid;
      run_jackknife(p, outdir);
    } else if (tab_cmd->parsed()) {
      json p;
      p["table"] = tb_table;
      if (tb_table == 3) {
        p["n"] = tb_n;
        p["nw"] = tb_nw;
        p["k"] = tb_k;
      }
      run_tables(p, outdir);
    } else if (cmp_cmd->parsed()) {
      json p = cm_config.empty() ? json::object() : params_from_config_file(cm_config);
      if (!cm_methods.empty()) p["methods"] = cm_methods;
      if (!cm_bands.empty()) p["bands"] = cm_bands;
      if (cm_record > 0) p["record_len"] = cm_record;
      if (cm_seglen > 0) p["segment_len"] = cm_seglen;
      if (cm_seed >= 0) p["seed"] = static_cast<std::uint64_t>(cm_seed);
      if (!cm_input.empty()) p["input"] = cm_input;
      if (!p.contains("model")) p["model"] = "tftr_like";
      run_compare(p, outdir);
    } else if (rerun_cmd->parsed()) {
      std::ifstream in(rr_manifest);
      if (!in) throw ParameterError("cannot open manifest " + rr_manifest);
      json m = json::parse(in);
      dispatch(m.at("command").get<std::string>(), m.at("params"), outdir);
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
