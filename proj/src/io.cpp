#include "mtspec/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mtspec::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw ParameterError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ParameterError("cannot open for reading: " + path.string());
  return in;
}

}  // namespace

void write_series_csv(const fs::path& path, const TimeSeries& x) {
  std::ofstream out = open_out(path);
  for (double v : x.samples) out << format_double(v) << "\n";
}

TimeSeries read_series_csv(const fs::path& path, double dt) {
  std::ifstream in = open_in(path);
  std::vector<double> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const char* begin = line.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
    if (end == begin || (end && *end != '\0'))
      throw ParameterError(path.string() + ":" + std::to_string(lineno) +
                           ": expected one numeric sample per line, got '" + line + "'");
    if (!std::isfinite(v))
      throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": non-finite sample");
    samples.push_back(v);
  }
  return TimeSeries(std::move(samples), dt);
}

void write_series_raw(const fs::path& path, const TimeSeries& x) {
  {
    std::ofstream out = open_out(path, std::ios::binary);
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(x.samples.data()),
              static_cast<std::streamsize>(x.samples.size() * sizeof(double)));
  }
  std::ofstream meta = open_out(fs::path(path.string() + ".meta"));
  meta << "sample_rate_hz=" << format_double(1.0 / x.dt) << "\n";
  meta << "n_samples=" << x.samples.size() << "\n";
  meta << "encoding=f64le\n";
}

TimeSeries read_series_raw(const fs::path& path) {
  const fs::path meta_path(path.string() + ".meta");
  std::ifstream meta = open_in(meta_path);
  double sample_rate = 0.0;
  std::size_t n_samples = 0;
  std::string encoding;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(meta, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(meta_path.string() + ":" + std::to_string(lineno) +
                           ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "sample_rate_hz") sample_rate = std::stod(value);
    else if (key == "n_samples") n_samples = std::stoull(value);
    else if (key == "encoding") encoding = value;
  }
  if (encoding != "f64le")
    throw ParameterError(meta_path.string() + ": unsupported encoding '" + encoding + "'");
  if (!(sample_rate > 0.0) || n_samples == 0)
    throw ParameterError(meta_path.string() + ": missing sample_rate_hz or n_samples");

  std::ifstream in = open_in(path, std::ios::binary);
  std::vector<double> samples(n_samples);
  in.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(n_samples * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n_samples * sizeof(double))
    throw ParameterError(path.string() + ": file shorter than n_samples in sidecar");
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!std::isfinite(samples[i]))
      throw ParameterError(path.string() + ": non-finite sample at offset " + std::to_string(i));
  return TimeSeries(std::move(samples), 1.0 / sample_rate);
}

void write_estimate_csv(const fs::path& path, const SpectralEstimate& est, double dt) {
  std::ofstream out = open_out(path);
  out << "frequency_hz,power,dof,ci_lo,ci_hi\n";
  for (std::size_t j = 0; j < est.grid.size; ++j) {
    out << format_double(est.grid.frequency(j) / dt) << ',' << format_double(est.values[j]) << ','
        << format_double(est.dof[j]) << ',';
    if (est.has_band())
      out << format_double(est.band_lo[j]) << ',' << format_double(est.band_hi[j]);
    else
      out << ',';
    out << '\n';
  }
}

void write_weights_csv(const fs::path& path, const WeightField& field, double dt) {
  std::ofstream out = open_out(path);
  out << "frequency_hz,k,weight,selected\n";
  for (std::size_t j = 0; j < field.grid.size; ++j) {
    for (int k = 0; k < field.K; ++k) {
      out << format_double(field.grid.frequency(j) / dt) << ',' << k << ','
          << format_double(field.weights[field.index(k, j)]) << ','
          << int(field.selected[field.index(k, j)]) << '\n';
    }
  }
}

void write_taper_csv(const fs::path& path, const Taper& taper) {
  std::ofstream out = open_out(path);
  out << "index,value\n";
  for (std::size_t i = 0; i < taper.size(); ++i)
    out << i << ',' << format_double(taper.values[i]) << '\n';
}

void write_report(const fs::path& dir, const ComparisonReport& report, double dt) {
  fs::create_directories(dir);

  {
    std::ofstream out = open_out(dir / "summary.csv");
    out << "method,optimal_w,optimal_score";
    for (std::size_t b = 0; b < report.bands.size(); ++b) out << ",band" << b + 1 << "_score";
    out << ",optimum_at_edge,failed,error\n";
    for (const MethodResult& r : report.methods) {
      out << r.spec.name << ',';
      if (r.failed) {
        out << ",,";
        for (std::size_t b = 0; b < report.bands.size(); ++b) out << ',';
        out << ",1," << r.error << '\n';
        continue;
      }
      out << format_double(r.optimal_w / dt) << ',' << format_double(r.optimal_score);
      for (double s : r.band_details[r.optimal_index].per_band) out << ',' << format_double(s);
      out << ',' << int(r.optimum_at_edge) << ",0,\n";
    }
  }

  const MethodResult* hybrid = nullptr;
  for (const MethodResult& r : report.methods)
    if (!r.failed && r.spec.kind == MethodKind::hybrid) hybrid = &r;

  for (const MethodResult& r : report.methods) {
    if (r.failed) continue;
    {
      std::ofstream out = open_out(dir / ("method-" + r.spec.name + ".csv"));
      out << "frequency_hz,bias,variance,rmse\n";
      for (std::size_t j = 0; j < report.grid.size; ++j)
        out << format_double(report.grid.frequency(j) / dt) << ',' << format_double(r.bias[j])
            << ',' << format_double(r.variance[j]) << ',' << format_double(r.rmse[j]) << '\n';
    }
    {
      std::ofstream out = open_out(dir / ("scores-" + r.spec.name + ".csv"));
      out << "w,combined_score";
      for (std::size_t b = 0; b < report.bands.size(); ++b) out << ",band" << b + 1 << "_score";
      out << '\n';
      for (std::size_t i = 0; i < r.spec.w_grid.size(); ++i) {
        out << format_double(r.spec.w_grid[i] / dt) << ',' << format_double(r.scores[i]);
        for (double s : r.band_details[i].per_band) out << ',' << format_double(s);
        out << '\n';
      }
    }
  }

  if (hybrid) {
    std::ofstream out = open_out(dir / "rmse-ratios.csv");
    out << "frequency_hz";
    for (const MethodResult& r : report.methods)
      if (!r.failed && &r != hybrid) out << ',' << r.spec.name << "_over_" << hybrid->spec.name;
    out << '\n';
    for (std::size_t j = 0; j < report.grid.size; ++j) {
      out << format_double(report.grid.frequency(j) / dt);
      for (const MethodResult& r : report.methods) {
        if (r.failed || &r == hybrid) continue;
        out << ',' << format_double(r.rmse[j] / hybrid->rmse[j]);
      }
      out << '\n';
    }
  }

  {
    std::ofstream out = open_out(dir / "reference.csv");
    out << "frequency_hz,power,dof\n";
    for (std::size_t j = 0; j < report.grid.size; ++j)
      out << format_double(report.grid.frequency(j) / dt) << ','
          << format_double(report.reference.values[j]) << ','
          << format_double(report.reference.dof[j]) << '\n';
  }
}

}  // namespace mtspec::io
