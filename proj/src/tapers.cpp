#include "mtspec/tapers.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtspec/fft.hpp"

namespace mtspec {

Taper rectangular_taper(std::size_t n, TaperNorm norm) {
  if (n < 2) throw ParameterError("rectangular_taper: need N >= 2");
  const double v = norm == TaperNorm::unit_energy ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
  return Taper{std::vector<double>(n, v), norm};
}

namespace {

// sin(2 pi W t) / (pi t) with the t = 0 limit 2W.
inline double concentration_kernel(double bandwidth, std::size_t t) {
  if (t == 0) return 2.0 * bandwidth;
  const double x = static_cast<double>(t);
  return std::sin(2.0 * M_PI * bandwidth * x) / (M_PI * x);
}

// lambda = sum_tau a(tau) r(tau) over the Toeplitz diagonals of A. Direct
// O(N^2) autocorrelation below the cutoff, FFT-based above; long double
// accumulation keeps 1 - lambda meaningful down to ~1e-13.
double quadratic_form(const std::vector<double>& v, double bandwidth) {
  const std::size_t n = v.size();
  long double acc = concentration_kernel(bandwidth, 0) *
                    static_cast<long double>(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (n <= 4096) {
    for (std::size_t t = 1; t < n; ++t) {
      long double r = 0.0;
      for (std::size_t i = 0; i + t < n; ++i) r += static_cast<long double>(v[i]) * v[i + t];
      acc += 2.0L * concentration_kernel(bandwidth, t) * r;
    }
  } else {
    const std::vector<double> r = fft::autocorrelation(v);
    for (std::size_t t = 1; t < n; ++t)
      acc += 2.0L * concentration_kernel(bandwidth, t) * static_cast<long double>(r[t]);
  }
  return static_cast<double>(acc);
}

// Fix each eigenvector's overall sign: nonnegative mean for even k,
// nonnegative first-half mean for odd k.
void apply_sign_convention(std::vector<double>& v, int k) {
  double s = 0.0;
  const std::size_t upto = (k % 2 == 0) ? v.size() : v.size() / 2;
  for (std::size_t i = 0; i < upto; ++i) s += v[i];
  if (s < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

SlepianFamily build_slepian_family(std::size_t n, double time_bandwidth, int k) {
  if (n < 8) throw ParameterError("build_slepian_family: need N >= 8");
  if (!(time_bandwidth > 0.0) || !(time_bandwidth < 0.5 * static_cast<double>(n)))
    throw ParameterError("build_slepian_family: time_bandwidth must lie in (0, N/2)");
  const int k_max = static_cast<int>(std::ceil(2.0 * time_bandwidth)) + 2;
  if (k < 1 || k > k_max)
    throw ParameterError("build_slepian_family: K must lie in [1, ceil(2*W_bar)+2] = [1, " +
                         std::to_string(k_max) + "]");

  const double bandwidth = time_bandwidth / static_cast<double>(n);
  const double cos2piw = std::cos(2.0 * M_PI * bandwidth);

  // Tridiagonal matrix commuting with the concentration matrix:
  // diag(i) = ((N-1-2i)/2)^2 cos(2 pi W), off(i) = i (N-i) / 2.
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = 0.5 * (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(i));
    diag[i] = d * d * cos2piw;
  }
  for (std::size_t i = 1; i < n; ++i)
    off[i - 1] = 0.5 * static_cast<double>(i) * static_cast<double>(n - i);

  // The K most concentrated tapers correspond to the K largest tridiagonal
  // eigenvalues.
  const lapack_int ln = static_cast<lapack_int>(n);
  const lapack_int il = ln - k + 1, iu = ln;
  lapack_int m_found = 0;
  std::vector<double> w(n), z(n * static_cast<std::size_t>(k));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', ln, diag.data(), off.data(),
                                         0.0, 0.0, il, iu, 0.0, &m_found, w.data(), z.data(), ln,
                                         isuppz.data());
  if (info != 0)
    throw NumericError("build_slepian_family: eigensolver failed at eigenpair " +
                       std::to_string(info));
  if (m_found != k)
    throw NumericError("build_slepian_family: expected " + std::to_string(k) +
                       " eigenpairs, got " + std::to_string(m_found));

  SlepianFamily fam;
  fam.N = n;
  fam.time_bandwidth = time_bandwidth;
  fam.K = k;
  fam.tapers.reserve(k);
  fam.eigenvalues.reserve(k);
  // Columns arrive in ascending tridiagonal-eigenvalue order; k = 0 is the
  // most concentrated taper, i.e. the last column.
  for (int kk = 0; kk < k; ++kk) {
    const std::size_t col = static_cast<std::size_t>(k - 1 - kk);
    std::vector<double> v(z.begin() + static_cast<std::ptrdiff_t>(col * n),
                          z.begin() + static_cast<std::ptrdiff_t>((col + 1) * n));
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
    apply_sign_convention(v, kk);
    fam.eigenvalues.push_back(quadratic_form(v, bandwidth));
    fam.tapers.push_back(Taper{std::move(v), TaperNorm::unit_energy});
  }
  return fam;
}

double concentration_eigenvalue(const Taper& taper, double bandwidth) {
  if (taper.size() < 2) throw ParameterError("concentration_eigenvalue: need N >= 2");
  if (!(bandwidth > 0.0) || !(bandwidth < 0.5))
    throw ParameterError("concentration_eigenvalue: W must lie in (0, 1/2)");
  if (std::abs(taper.energy() - 1.0) > 1e-12)
    throw ParameterError("concentration_eigenvalue: taper must have unit energy");
  return quadratic_form(taper.values, bandwidth);
}

Taper build_tukey_taper(std::size_t n, double alpha_n) {
  if (n < 2) throw ParameterError("build_tukey_taper: need N >= 2");
  if (alpha_n < 0.0 || alpha_n > 0.5 * static_cast<double>(n))
    throw ParameterError("build_tukey_taper: alphaN must lie in [0, N/2]");
  std::vector<double> v(n, 1.0);
  // The published formula indexes samples j = 1..N.
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i + 1);
    if (j < alpha_n) {
      v[i] = 0.5 * (1.0 - std::cos(M_PI * (j - 0.5) / alpha_n));
    } else if (j > static_cast<double>(n) - alpha_n) {
      v[i] = 0.5 * (1.0 - std::cos(M_PI * (static_cast<double>(n) - j + 0.5) / alpha_n));
    }
  }
  return Taper{std::move(v), TaperNorm::raw};
}

SpectralWindow spectral_window(const Taper& taper, std::size_t grid_size) {
  const std::size_t n = taper.size();
  if (grid_size < n) throw ParameterError("spectral_window: grid_size must be >= N");
  // One real transform gives the nonnegative half; the negative half follows
  // from conjugate symmetry of the unshifted transform of a real sequence.
  std::vector<double> padded(grid_size, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = taper.values[i];
  const std::vector<std::complex<double>> y = fft::forward_r2c(padded);

  const double c = 0.5 * static_cast<double>(n - 1);
  SpectralWindow win;
  win.frequencies.resize(grid_size);
  win.values.resize(grid_size);
  const std::size_t half = grid_size / 2;
  for (std::size_t g = 0; g < grid_size; ++g) {
    // Frequencies ascending over [-1/2, 1/2).
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(g) - static_cast<std::ptrdiff_t>(half);
    const double f = static_cast<double>(m) / static_cast<double>(grid_size);
    std::complex<double> base =
        m >= 0 ? y[static_cast<std::size_t>(m)] : std::conj(y[static_cast<std::size_t>(-m)]);
    const double phase = 2.0 * M_PI * f * c;
    win.frequencies[g] = f;
    win.values[g] = base * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return win;
}

}  // namespace mtspec
