#include "vhkg/nonlinear_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tables.hpp"

namespace vhkg {

namespace {

void require_finite(const SpectralField& u, const char* op) {
  if (!detail::all_finite(u)) throw std::domain_error(std::string(op) + ": non-finite input field");
}

}  // namespace

SpectralField apply_B(const KernelSpec& kernel, const SpectralField& u, const SpectralField& v) {
  detail::require_same_grid(u, v);
  require_finite(u, "apply_B");
  require_finite(v, "apply_B");
  if (kernel.is_constant()) {
    const Complex c = kernel.constant_value();
    if (c == Complex(0.0, 0.0)) return zero_field(u.grid);
    return c * detail::convolve_fft(u, v);
  }
  const int n = u.size();
  const int cen = u.grid.center();
  SpectralField r = zero_field(u.grid);
  for (int j = 0; j < n; ++j) {
    const double k = u.grid.node(j);
    Complex acc = 0.0;
    const int m_lo = std::max(0, j + cen - (n - 1));
    const int m_hi = std::min(n - 1, j + cen);
    for (int m = m_lo; m <= m_hi; ++m)
      acc += kernel.eval(k, u.grid.node(m)) * u.values[j - m + cen] * v.values[m];
    r.values[j] = u.grid.spacing * acc;
  }
  return r;
}

SpectralField apply_B(const KernelSpec& kernel, const SpectralField& u) {
  return apply_B(kernel, u, u);
}

SpectralField apply_A2(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u,
                       const SpectralField& v) {
  detail::require_same_grid(u, v);
  require_finite(u, "apply_A2");
  require_finite(v, "apply_A2");
  const int n = u.size();
  const int cen = u.grid.center();
  const detail::PhasePairTable tab(cfg, u.grid);
  const bool constant = kernel.is_constant();
  const Complex bc = constant ? kernel.constant_value() : Complex{};
  SpectralField r = zero_field(u.grid);
  for (int j = 0; j < n; ++j) {
    const double k = u.grid.node(j);
    Complex acc = 0.0;
    const int m_lo = std::max(0, j + cen - (n - 1));
    const int m_hi = std::min(n - 1, j + cen);
    for (int m = m_lo; m <= m_hi; ++m) {
      const size_t idx = static_cast<size_t>(j) * n + m;
      const Complex inv_phi(tab.inv_re[idx], tab.inv_im[idx]);
      const Complex b = constant ? bc : kernel.eval(k, u.grid.node(m));
      acc += b * inv_phi * u.values[j - m + cen] * v.values[m];
    }
    r.values[j] = u.grid.spacing * acc;
  }
  return r;
}

namespace {

// Core trilinear sweep for constant kernels:
//   out_j += dk^2 * Bc^2 * sum_{l,m} (R(j,m) + R(j,l)) / (phi(j,l) + phi(l,m))
//                            * outer_s(j-l) * table_s(l,m)
// fused over NSETS (outer field, pair-product table) sets sharing the kernel
// evaluation. Out-of-grid outer reads are zero.
template <int NSETS>
void a3_sweep_constant(const detail::PhasePairTable& tab, const FrequencyGrid& grid, Complex bc2,
                       const SpectralField* const* outers,
                       const std::vector<double>* table_re, const std::vector<double>* table_im,
                       SpectralField& out) {
  const int n = grid.count;
  const int cen = grid.center();
  const double scale_re = bc2.real() * grid.spacing * grid.spacing;
  const double scale_im = bc2.imag() * grid.spacing * grid.spacing;
  for (int j = 0; j < n; ++j) {
    double row_re[NSETS] = {}, row_im[NSETS] = {};
    const double* __restrict rr = &tab.inv_re[static_cast<size_t>(j) * n];
    const double* __restrict ri = &tab.inv_im[static_cast<size_t>(j) * n];
    const int l_lo = std::max(0, j + cen - (n - 1));
    const int l_hi = std::min(n - 1, j + cen);
    for (int l = l_lo; l <= l_hi; ++l) {
      double o_re[NSETS], o_im[NSETS];
      bool any = false;
      for (int s = 0; s < NSETS; ++s) {
        const Complex o = outers[s]->values[j - l + cen];
        o_re[s] = o.real();
        o_im[s] = o.imag();
        any = any || (o_re[s] != 0.0 || o_im[s] != 0.0);
      }
      if (!any) continue;
      const size_t jl = static_cast<size_t>(j) * n + l;
      const double fkl_re = tab.phi_re[jl], fkl_im = tab.phi_im[jl];
      const double rkl_re = tab.inv_re[jl], rkl_im = tab.inv_im[jl];
      const double* __restrict pr = &tab.phi_re[static_cast<size_t>(l) * n];
      const double* __restrict pi = &tab.phi_im[static_cast<size_t>(l) * n];
      double acc_re[NSETS] = {}, acc_im[NSETS] = {};
      for (int m = 0; m < n; ++m) {
        const double den_re = fkl_re + pr[m];
        const double den_im = fkl_im + pi[m];
        const double num_re = rkl_re + rr[m];
        const double num_im = rkl_im + ri[m];
        const double inv = 1.0 / (den_re * den_re + den_im * den_im);
        const double a_re = (num_re * den_re + num_im * den_im) * inv;
        const double a_im = (num_im * den_re - num_re * den_im) * inv;
        for (int s = 0; s < NSETS; ++s) {
          const double t_re = table_re[s][static_cast<size_t>(l) * n + m];
          const double t_im = table_im[s][static_cast<size_t>(l) * n + m];
          acc_re[s] += a_re * t_re - a_im * t_im;
          acc_im[s] += a_re * t_im + a_im * t_re;
        }
      }
      for (int s = 0; s < NSETS; ++s) {
        row_re[s] += o_re[s] * acc_re[s] - o_im[s] * acc_im[s];
        row_im[s] += o_re[s] * acc_im[s] + o_im[s] * acc_re[s];
      }
    }
    double sum_re = 0.0, sum_im = 0.0;
    for (int s = 0; s < NSETS; ++s) {
      sum_re += row_re[s];
      sum_im += row_im[s];
    }
    out.values[j] += Complex(scale_re * sum_re - scale_im * sum_im,
                             scale_re * sum_im + scale_im * sum_re);
  }
}

void fill_pair_table(const SpectralField& a, const SpectralField& b, std::vector<double>& t_re,
                     std::vector<double>& t_im, bool accumulate = false) {
  const int n = a.size();
  const int cen = a.grid.center();
  if (!accumulate) {
    t_re.assign(static_cast<size_t>(n) * n, 0.0);
    t_im.assign(static_cast<size_t>(n) * n, 0.0);
  }
  for (int l = 0; l < n; ++l) {
    const int m_lo = std::max(0, l + cen - (n - 1));
    const int m_hi = std::min(n - 1, l + cen);
    for (int m = m_lo; m <= m_hi; ++m) {
      const Complex v = a.values[l - m + cen] * b.values[m];
      t_re[static_cast<size_t>(l) * n + m] += v.real();
      t_im[static_cast<size_t>(l) * n + m] += v.imag();
    }
  }
}

SpectralField apply_A3_general(const SymbolConfig& cfg, const KernelSpec& kernel,
                               const SpectralField& u1, const SpectralField& u2,
                               const SpectralField& u3) {
  const int n = u1.size();
  const int cen = u1.grid.center();
  const FrequencyGrid& grid = u1.grid;
  SpectralField r = zero_field(grid);
  for (int j = 0; j < n; ++j) {
    const double k = grid.node(j);
    Complex acc = 0.0;
    for (int l = 0; l < n; ++l) {
      const int i1 = j - l + cen;
      if (i1 < 0 || i1 >= n) continue;
      const Complex o = u1.values[i1];
      if (o == Complex(0.0, 0.0)) continue;
      const double kl = grid.node(l);
      Complex inner = 0.0;
      const int m_lo = std::max(0, l + cen - (n - 1));
      const int m_hi = std::min(n - 1, l + cen);
      for (int m = m_lo; m <= m_hi; ++m) {
        const double km = grid.node(m);
        inner += A3_hat(cfg, kernel, k, kl, km) * u2.values[l - m + cen] * u3.values[m];
      }
      acc += o * inner;
    }
    r.values[j] = grid.spacing * grid.spacing * acc;
  }
  return r;
}

}  // namespace

SpectralField apply_A3(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u1,
                       const SpectralField& u2, const SpectralField& u3) {
  detail::require_same_grid(u1, u2);
  detail::require_same_grid(u1, u3);
  require_finite(u1, "apply_A3");
  require_finite(u2, "apply_A3");
  require_finite(u3, "apply_A3");
  if (!kernel.is_constant()) return apply_A3_general(cfg, kernel, u1, u2, u3);
  const Complex bc = kernel.constant_value();
  if (bc == Complex(0.0, 0.0)) return zero_field(u1.grid);
  const detail::PhasePairTable tab(cfg, u1.grid);
  std::vector<double> t_re, t_im;
  fill_pair_table(u2, u3, t_re, t_im);
  SpectralField r = zero_field(u1.grid);
  const SpectralField* outer[1] = {&u1};
  a3_sweep_constant<1>(tab, u1.grid, bc * bc, outer, &t_re, &t_im, r);
  return r;
}

SpectralField apply_T(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u) {
  const SpectralField b = apply_B(kernel, u);
  return apply_A2(cfg, kernel, b, u) + apply_A2(cfg, kernel, u, b);
}

SpectralField apply_T_direct(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u) {
  require_finite(u, "apply_T_direct");
  const int n = u.size();
  const int cen = u.grid.center();
  const FrequencyGrid& grid = u.grid;
  SpectralField r = zero_field(grid);
  for (int j = 0; j < n; ++j) {
    const double k = grid.node(j);
    Complex acc = 0.0;
    for (int l = 0; l < n; ++l) {
      const int i1 = j - l + cen;
      if (i1 < 0 || i1 >= n) continue;
      const Complex o = u.values[i1];
      if (o == Complex(0.0, 0.0)) continue;
      const double kl = grid.node(l);
      const Complex a2_kl = A2_hat(cfg, kernel, k, kl);
      Complex inner = 0.0;
      const int m_lo = std::max(0, l + cen - (n - 1));
      const int m_hi = std::min(n - 1, l + cen);
      for (int m = m_lo; m <= m_hi; ++m) {
        const double km = grid.node(m);
        const Complex cubic_kernel =
            A2_hat(cfg, kernel, k, km) * kernel.eval(k - km, kl - km) + a2_kl * kernel.eval(kl, km);
        inner += cubic_kernel * u.values[l - m + cen] * u.values[m];
      }
      acc += o * inner;
    }
    r.values[j] = grid.spacing * grid.spacing * acc;
  }
  return r;
}

SpectralField apply_Q(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u) {
  require_finite(u, "apply_Q");
  const SpectralField b = apply_B(kernel, u);
  if (!kernel.is_constant()) {
    return apply_A3_general(cfg, kernel, b, u, u) + apply_A3_general(cfg, kernel, u, b, u) +
           apply_A3_general(cfg, kernel, u, u, b);
  }
  const Complex bc = kernel.constant_value();
  if (bc == Complex(0.0, 0.0)) return zero_field(u.grid);
  const detail::PhasePairTable tab(cfg, u.grid);
  // Set 0: A3(b, u, u); set 1: A3(u, b, u) + A3(u, u, b) share the outer u.
  std::vector<double> t_re[2], t_im[2];
  fill_pair_table(u, u, t_re[0], t_im[0]);
  fill_pair_table(b, u, t_re[1], t_im[1]);
  fill_pair_table(u, b, t_re[1], t_im[1], /*accumulate=*/true);
  SpectralField r = zero_field(u.grid);
  const SpectralField* outers[2] = {&b, &u};
  a3_sweep_constant<2>(tab, u.grid, bc * bc, outers, t_re, t_im, r);
  return r;
}

SpectralField apply_Q_direct(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u) {
  require_finite(u, "apply_Q_direct");
  const int n = u.size();
  if (n > 129)
    throw std::invalid_argument("apply_Q_direct: grid too fine for the quadruple quadrature (N <= 129)");
  const int cen = u.grid.center();
  const FrequencyGrid& grid = u.grid;
  SpectralField r = zero_field(grid);
  for (int j = 0; j < n; ++j) {
    const double k = grid.node(j);
    Complex acc_l = 0.0;
    for (int l = 0; l < n; ++l) {
      const int i1 = j - l + cen;
      if (i1 < 0 || i1 >= n) continue;
      if (u.values[i1] == Complex(0.0, 0.0)) continue;
      const double kl = grid.node(l);
      Complex acc_m = 0.0;
      for (int m = 0; m < n; ++m) {
        const int i2 = l - m + cen;
        if (i2 < 0 || i2 >= n) continue;
        if (u.values[i2] == Complex(0.0, 0.0)) continue;
        const double km = grid.node(m);
        Complex acc_n = 0.0;
        const int n_lo = std::max(0, m + cen - (n - 1));
        const int n_hi = std::min(n - 1, m + cen);
        for (int q = n_lo; q <= n_hi; ++q) {
          const double kn = grid.node(q);
          acc_n += Q_hat(cfg, kernel, k, kl, km, kn) * u.values[m - q + cen] * u.values[q];
        }
        acc_m += u.values[i2] * acc_n;
      }
      acc_l += u.values[i1] * acc_m;
    }
    const double dk = grid.spacing;
    r.values[j] = dk * dk * dk * acc_l;
  }
  return r;
}

SpectralField random_band_limited_field(const FrequencyGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f = zero_field(grid);
  const int cen = grid.center();
  const int half = cen / 2;  // support |k| <= K/2
  for (int j = cen - half; j <= cen + half; ++j)
    f.values[j] = Complex(gauss(rng), gauss(rng));
  const double l1 = detail::raw_norms(f).l1;
  if (l1 > 0.0) f = (1.0 / l1) * f;
  return f;
}

double pick_norm(const NormTriple& n, LebesgueExponent p) {
  switch (p) {
    case LebesgueExponent::p1: return n.l1;
    case LebesgueExponent::p2: return n.l2;
    default: return n.linf;
  }
}

namespace {

// splitmix64 step; decorrelates per-member seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

MultilinearEstimateReport estimate_multilinear_constant(const SymbolConfig& cfg,
                                                        const KernelSpec& kernel,
                                                        const FrequencyGrid& grid, OperatorId op,
                                                        LebesgueExponent p, int ensemble_size,
                                                        std::uint64_t seed) {
  if (ensemble_size < 100)
    throw std::invalid_argument("estimate_multilinear_constant: ensemble_size must be >= 100");
  int degree = 2;
  if (op == OperatorId::A3) degree = 3;
  if (op == OperatorId::Q) degree = 4;
  double worst = 0.0;
  for (int i = 0; i < ensemble_size; ++i) {
    const SpectralField u = random_band_limited_field(grid, derive_seed(seed, i));
    const NormTriple nu = norms(u);
    const double rhs = std::pow(nu.l1, degree - 1) * pick_norm(nu, p);
    if (!(rhs > 0.0)) continue;  // degenerate member
    SpectralField fu = zero_field(grid);
    switch (op) {
      case OperatorId::B: fu = apply_B(kernel, u); break;
      case OperatorId::A2: fu = apply_A2(cfg, kernel, u, u); break;
      case OperatorId::A3: fu = apply_A3(cfg, kernel, u, u, u); break;
      case OperatorId::Q: fu = apply_Q(cfg, kernel, u); break;
    }
    worst = std::max(worst, pick_norm(norms(fu), p) / rhs);
  }
  return MultilinearEstimateReport{op, p, worst, ensemble_size, seed};
}

}  // namespace vhkg
