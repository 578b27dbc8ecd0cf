#include "vhkg/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vhkg {

Complex lambda_hat(const SymbolConfig& cfg, double k) {
  return Complex(-cfg.d * k * k, -japanese_bracket(k));
}

std::pair<Complex, Complex> vkg_eigenvalues(double alpha, double beta, double gamma, double k) {
  const double k2 = k * k;
  const double disc = 0.25 * alpha * alpha * k2 * k2 - beta * beta * (gamma + k2);
  const Complex root = std::sqrt(Complex(disc, 0.0));
  const Complex base(-0.5 * alpha * k2, 0.0);
  return {base + root, base - root};
}

double phi_re(const SymbolConfig& cfg, double k, double l) { return 2.0 * cfg.d * l * (k - l); }

double phi_im(double k, double l) {
  return japanese_bracket(k) - japanese_bracket(k - l) - japanese_bracket(l);
}

Complex phi(const SymbolConfig& cfg, double k, double l) {
  return Complex(phi_re(cfg, k, l), phi_im(k, l));
}

Complex psi1(const SymbolConfig& cfg, double k, double y) {
  return Complex(cfg.d * k * k, phi_im(k, y));
}

Complex psi2(const SymbolConfig& cfg, double k, double y, double z) {
  return Complex(cfg.d * k * k, phi_im(k, y) + phi_im(y, z));
}

Complex psi3(const SymbolConfig& cfg, double k, double y, double z) {
  return phi(cfg, k, y) + phi(cfg, y, z);
}

KernelSpec KernelSpec::constant(Complex c) {
  KernelSpec ks;
  ks.constant_ = true;
  ks.c_ = c;
  ks.sup_ = std::abs(c);
  return ks;
}

KernelSpec KernelSpec::standard_quadratic() { return constant(Complex(0.5 / M_PI, 0.0)); }

KernelSpec KernelSpec::zero() { return constant(Complex(0.0, 0.0)); }

KernelSpec KernelSpec::tabulated(double box_half_width, int samples_per_axis,
                                 std::vector<Complex> samples, double sup_bound) {
  if (!(box_half_width > 0.0)) throw std::invalid_argument("kernel table: box must be positive");
  if (samples_per_axis < 2) throw std::invalid_argument("kernel table: need >= 2 samples per axis");
  if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound))
    throw std::invalid_argument("kernel table: sup bound must be finite and nonnegative");
  const size_t expected = static_cast<size_t>(samples_per_axis) * samples_per_axis;
  if (samples.size() != expected) throw std::invalid_argument("kernel table: sample count mismatch");
  for (const Complex& s : samples) {
    if (std::abs(s) > sup_bound * (1.0 + 1e-12))
      throw std::invalid_argument("kernel table: sample exceeds declared sup bound");
  }
  KernelSpec ks;
  ks.constant_ = false;
  ks.box_ = box_half_width;
  ks.n_ = samples_per_axis;
  ks.samples_ = std::move(samples);
  ks.sup_ = sup_bound;
  return ks;
}

Complex KernelSpec::eval(double k, double l) const {
  if (constant_) return c_;
  const double h = 2.0 * box_ / static_cast<double>(n_ - 1);
  auto locate = [&](double x) {
    const double t = std::clamp((x + box_) / h, 0.0, static_cast<double>(n_ - 1));
    int i = std::min(static_cast<int>(t), n_ - 2);
    return std::pair<int, double>(i, t - i);
  };
  const auto [ik, tk] = locate(k);
  const auto [il, tl] = locate(l);
  auto at = [&](int a, int b) { return samples_[static_cast<size_t>(a) * n_ + b]; };
  Complex v = (1.0 - tk) * ((1.0 - tl) * at(ik, il) + tl * at(ik, il + 1)) +
              tk * ((1.0 - tl) * at(ik + 1, il) + tl * at(ik + 1, il + 1));
  const double a = std::abs(v);
  if (a > sup_) v *= sup_ / a;
  return v;
}

double KernelSpec::sup_bound() const { return sup_; }

Complex KernelSpec::constant_value() const {
  if (!constant_) throw std::logic_error("kernel is not constant");
  return c_;
}

namespace {

Complex guarded_div(Complex num, Complex den, const char* what) {
  if (std::abs(den) < kPhaseGuard)
    throw std::domain_error(std::string("phase denominator vanished in ") + what +
                            " (contradicts the nonresonance certificate)");
  return num / den;
}

}  // namespace

Complex A2_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l) {
  return guarded_div(kernel.eval(k, l), phi(cfg, k, l), "A2_hat");
}

Complex A3_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l, double m) {
  const Complex pkl = phi(cfg, k, l);
  const Complex plm = phi(cfg, l, m);
  const Complex pkm = phi(cfg, k, m);
  const Complex bracket = guarded_div(kernel.eval(k, m) * kernel.eval(k - m, l - m), pkm, "A3_hat") +
                          guarded_div(kernel.eval(k, l) * kernel.eval(l, m), pkl, "A3_hat");
  return guarded_div(bracket, pkl + plm, "A3_hat");
}

Complex Q_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l, double m,
              double n) {
  return A3_hat(cfg, kernel, k, m, n) * kernel.eval(k - m, l - m) +
         A3_hat(cfg, kernel, k, l, n) * kernel.eval(l - n, m - n) +
         A3_hat(cfg, kernel, k, l, m) * kernel.eval(m, n);
}

Complex f1(const SymbolConfig& cfg, double k, double y) {
  return guarded_div(psi1(cfg, k, y), phi(cfg, k, y), "f1");
}

Complex g1(const SymbolConfig& cfg, double k, double y, double z) {
  return guarded_div(psi2(cfg, k, y, z), psi3(cfg, k, y, z), "g1");
}

bool PhaseCertificate::holds() const {
  return delta > 0.0 && phi0_analytic > 0.0 && psi0_analytic > 0.0 && phi_grid_min > 0.0 &&
         psi_grid_min > 0.0 && phi_im_max <= -1e-12 &&
         phi_grid_min >= phi0_analytic - phi_scan_slack &&
         psi_grid_min >= psi0_analytic - psi_scan_slack;
}

PhaseCertificate certify_phase_bounds(const SymbolConfig& cfg, double box_half_width,
                                      double resolution, double psi_box_half_width,
                                      double psi_resolution) {
  if (!(cfg.d > 0.0)) throw std::invalid_argument("certify_phase_bounds: d must be positive");
  if (!(box_half_width >= 4.0))
    throw std::invalid_argument("certify_phase_bounds: box half-width must be >= 4");
  if (!(resolution > 0.0 && resolution <= 0.05))
    throw std::invalid_argument("certify_phase_bounds: resolution must be in (0, 0.05]");
  if (!(psi_box_half_width >= 4.0))
    throw std::invalid_argument("certify_phase_bounds: psi box half-width must be >= 4");
  if (!(psi_resolution > 0.0 && psi_resolution <= 0.05))
    throw std::invalid_argument("certify_phase_bounds: psi resolution must be in (0, 0.05]");

  PhaseCertificate cert;
  cert.d = cfg.d;
  cert.phi_box_half_width = box_half_width;
  cert.phi_resolution = resolution;
  cert.psi_box_half_width = psi_box_half_width;
  cert.psi_resolution = psi_resolution;

  // Convexity margin: delta = -max_{|l| <= 1/2} (sqrt(1/4 + l^2) - sqrt(1 + l^2)),
  // located by a 1-D scan. The maximum sits at |l| = 1/2.
  {
    const int n = 20001;
    double best = -HUGE_VAL;
    for (int i = 0; i < n; ++i) {
      const double l = -0.5 + static_cast<double>(i) / (n - 1);
      const double h = std::sqrt(0.25 + l * l) - std::sqrt(1.0 + l * l);
      best = std::max(best, h);
    }
    cert.delta = -best;
  }
  cert.phi0_analytic = std::min(0.5 * cfg.d, cert.delta);
  cert.psi0_analytic = std::min({cfg.d, 1.0, cert.delta});

  // Scan lattice i * res, i = -half..half, covering [-B, B] (the box is
  // rounded outward to whole cells so node differences stay on the lattice).
  auto lattice = [](double half_width, double res) {
    const int half = static_cast<int>(std::ceil(half_width / res - 1e-12));
    std::vector<double> xs(2 * half + 1);
    for (int i = -half; i <= half; ++i) xs[i + half] = i * res;
    return xs;
  };

  // |phi| over the 2-D box.
  {
    const std::vector<double> xs = lattice(box_half_width, resolution);
    const int n = static_cast<int>(xs.size());
    std::vector<double> jb(n);
    for (int i = 0; i < n; ++i) jb[i] = japanese_bracket(xs[i]);
    double min_mod = HUGE_VAL, max_im = -HUGE_VAL;
    for (int a = 0; a < n; ++a) {
      const double k = xs[a];
      for (int b = 0; b < n; ++b) {
        const double l = xs[b];
        const double re = 2.0 * cfg.d * l * (k - l);
        const double im = jb[a] - japanese_bracket(k - l) - jb[b];
        const double mod = std::hypot(re, im);
        min_mod = std::min(min_mod, mod);
        max_im = std::max(max_im, im);
      }
    }
    cert.phi_grid_min = min_mod;
    cert.phi_im_max = max_im;
  }
  cert.phi_scan_slack = (2.0 * cfg.d * 3.0 * box_half_width + 3.0) * resolution;

  // |psi| = |phi(k,l) + phi(l,m)| over the 3-D box. Brackets of all pairwise
  // differences are precomputed on the doubled lattice.
  {
    const std::vector<double> xs = lattice(psi_box_half_width, psi_resolution);
    const int n = static_cast<int>(xs.size());
    std::vector<double> jb(n);
    for (int i = 0; i < n; ++i) jb[i] = japanese_bracket(xs[i]);
    std::vector<double> jbd(2 * n - 1);
    for (int i = 0; i < 2 * n - 1; ++i)
      jbd[i] = japanese_bracket((i - (n - 1)) * psi_resolution);
    double min_mod = HUGE_VAL;
    for (int a = 0; a < n; ++a) {
      const double k = xs[a];
      for (int b = 0; b < n; ++b) {
        const double l = xs[b];
        const double re_kl = 2.0 * cfg.d * l * (k - l);
        const double im_kl = jb[a] - jbd[a - b + n - 1] - jb[b];
        for (int c = 0; c < n; ++c) {
          const double m = xs[c];
          const double re = re_kl + 2.0 * cfg.d * m * (l - m);
          const double im = im_kl + jb[b] - jbd[b - c + n - 1] - jb[c];
          const double mod2 = re * re + im * im;
          if (mod2 < min_mod) min_mod = mod2;
        }
      }
    }
    cert.psi_grid_min = std::sqrt(min_mod);
  }
  cert.psi_scan_slack = (12.0 * cfg.d * psi_box_half_width + 6.0) * psi_resolution;

  if (!cert.holds()) {
    throw CertificateViolation(
        "phase scan undercut the analytic nonresonance bound (phi_grid_min=" +
        std::to_string(cert.phi_grid_min) + ", psi_grid_min=" + std::to_string(cert.psi_grid_min) +
        "); this indicates an implementation bug");
  }
  return cert;
}

}  // namespace vhkg
