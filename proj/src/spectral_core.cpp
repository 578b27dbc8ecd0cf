#include "vhkg/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vhkg {

FrequencyGrid make_grid(double cutoff, int count) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("make_grid: cutoff K must be positive");
  if (count < 3) throw std::invalid_argument("make_grid: need at least 3 nodes");
  if (count % 2 == 0) throw std::invalid_argument("make_grid: node count must be odd so k = 0 is a node");
  FrequencyGrid g;
  g.cutoff = cutoff;
  g.count = count;
  g.spacing = 2.0 * cutoff / static_cast<double>(count - 1);
  return g;
}

SpectralField zero_field(const FrequencyGrid& grid) {
  return SpectralField{grid, std::vector<Complex>(static_cast<size_t>(grid.count))};
}

SpectralField gaussian_profile(double eta, const FrequencyGrid& grid) {
  SpectralField f = zero_field(grid);
  const double amp = eta * std::sqrt(M_PI);
  for (int j = 0; j < grid.count; ++j) {
    const double k = grid.node(j);
    f.values[j] = amp * std::exp(-0.25 * k * k);
  }
  return f;
}

namespace detail {

bool all_finite(const SpectralField& f) noexcept {
  for (const Complex& v : f.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

NormTriple raw_norms(const SpectralField& f) noexcept {
  const int n = f.size();
  const double dk = f.grid.spacing;
  double s1 = 0.0, s2 = 0.0, sinf = 0.0;
  for (int j = 0; j < n; ++j) {
    double a = std::abs(f.values[j]);
    if (!std::isfinite(a)) a = HUGE_VAL;
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    s1 += w * a;
    s2 += w * a * a;
    if (a > sinf) sinf = a;
  }
  return NormTriple{dk * s1, std::sqrt(dk * s2), sinf};
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace detail

NormTriple norms(const SpectralField& f) {
  if (!detail::all_finite(f)) throw std::domain_error("norms: field has non-finite entries");
  return detail::raw_norms(f);
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  detail::require_same_grid(f, g);
  const int n = f.size();
  const int c = f.grid.center();
  SpectralField r = zero_field(f.grid);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    // f(k_j - k_m) sits at index j - m + c; out-of-range reads are zero.
    const int m_lo = std::max(0, j + c - (n - 1));
    const int m_hi = std::min(n - 1, j + c);
    for (int m = m_lo; m <= m_hi; ++m) acc += f.values[j - m + c] * g.values[m];
    r.values[j] = f.grid.spacing * acc;
  }
  return r;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  detail::require_same_grid(a, b);
  SpectralField r = a;
  for (int j = 0; j < r.size(); ++j) r.values[j] += b.values[j];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  detail::require_same_grid(a, b);
  SpectralField r = a;
  for (int j = 0; j < r.size(); ++j) r.values[j] -= b.values[j];
  return r;
}

SpectralField operator*(Complex c, const SpectralField& f) {
  SpectralField r = f;
  for (Complex& v : r.values) v *= c;
  return r;
}

SpectralField operator*(double c, const SpectralField& f) { return Complex(c, 0.0) * f; }

namespace detail {

namespace {

struct FftPlans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// In-place unaligned plans cached per transform size. Plan creation is not
// thread-safe in FFTW, execution is.
const FftPlans& plans_for(int m) {
  static std::mutex mu;
  static std::map<int, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Complex> scratch(static_cast<size_t>(m));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  FftPlans p;
  p.fwd = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(m, p).first->second;
}

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

SpectralField convolve_fft(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const int n = f.size();
  const int c = f.grid.center();
  const int m = next_pow2(2 * n);
  const FftPlans& p = plans_for(m);

  std::vector<Complex> fa(static_cast<size_t>(m));
  std::memcpy(fa.data(), f.values.data(), sizeof(Complex) * n);
  fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(fa.data()),
                   reinterpret_cast<fftw_complex*>(fa.data()));

  std::vector<Complex> ga;
  const bool same = &f == &g;
  if (!same) {
    ga.assign(static_cast<size_t>(m), Complex{});
    std::memcpy(ga.data(), g.values.data(), sizeof(Complex) * n);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(ga.data()),
                     reinterpret_cast<fftw_complex*>(ga.data()));
  }
  const std::vector<Complex>& gb = same ? fa : ga;

  for (int i = 0; i < m; ++i) fa[i] *= gb[i];
  fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(fa.data()),
                   reinterpret_cast<fftw_complex*>(fa.data()));

  SpectralField r = zero_field(f.grid);
  const double scale = f.grid.spacing / static_cast<double>(m);
  // Linear-convolution index j + c picks out the lattice point k_j.
  for (int j = 0; j < n; ++j) r.values[j] = scale * fa[j + c];
  return r;
}

}  // namespace detail

}  // namespace vhkg
