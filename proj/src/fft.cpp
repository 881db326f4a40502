#include "mtspec/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "mtspec/errors.hpp"

namespace mtspec::fft {
namespace {

// FFTW planning is not reentrant and plans are worth reusing across the many
// same-length transforms a comparison run performs. Plans are created with
// FFTW_UNALIGNED so the new-array execute interface accepts any buffer.
struct PlanCache {
  std::unordered_map<std::size_t, fftw_plan> r2c;
  std::unordered_map<std::size_t, fftw_plan> c2r;
  std::mutex mu;

  fftw_plan get_r2c(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = r2c.find(n);
    if (it != r2c.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericError("fftw: failed to plan r2c of length " + std::to_string(n));
    r2c.emplace(n, p);
    return p;
  }

  fftw_plan get_c2r(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = c2r.find(n);
    if (it != c2r.end()) return it->second;
    std::vector<std::complex<double>> in(n / 2 + 1);
    std::vector<double> out(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericError("fftw: failed to plan c2r of length " + std::to_string(n));
    c2r.emplace(n, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::size_t next_fast_len(std::size_t n) {
  if (n <= 2) return 2;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    while (r % 5 == 0) r /= 5;
    if (r == 1) return m;
  }
}

std::vector<std::complex<double>> forward_r2c(const std::vector<double>& in) {
  const std::size_t n = in.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  std::vector<double> buf(in);  // the transform destroys its input for some plans
  fftw_execute_dft_r2c(cache().get_r2c(n), buf.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> inverse_c2r(const std::vector<std::complex<double>>& half, std::size_t n) {
  if (half.size() != n / 2 + 1) throw ParameterError("inverse_c2r: wrong spectrum size");
  std::vector<std::complex<double>> buf(half);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(cache().get_c2r(n), reinterpret_cast<fftw_complex*>(buf.data()),
                       out.data());
  return out;
}

std::vector<std::complex<double>> dtft_onesided(const std::vector<double>& x, std::size_t m) {
  const std::size_t n = x.size();
  const std::size_t L = 2 * (m - 1);
  if (L < n) throw ParameterError("dtft_onesided: grid too small for input length");
  std::vector<double> padded(L, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = x[i];
  std::vector<std::complex<double>> y = forward_r2c(padded);  // size m
  // Shift the time origin to the record midpoint: multiply by
  // exp(+2 pi i f_j c), c = (N-1)/2, f_j = j/L.
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::size_t j = 0; j < m; ++j) {
    const double phase = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(L) * c;
    y[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return y;
}

std::vector<double> autocorrelation(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::size_t L = next_fast_len(2 * n);
  std::vector<double> padded(L, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = x[i];
  std::vector<std::complex<double>> y = forward_r2c(padded);
  for (auto& v : y) v = std::norm(v);
  std::vector<double> r = inverse_c2r(y, L);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = r[t] / static_cast<double>(L);
  return out;
}

}  // namespace mtspec::fft
