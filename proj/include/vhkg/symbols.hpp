#pragma once

// The Fourier symbol of the linear operator, the interaction phase functions
// phi / psi, the kernels of the normal-form transform (A2_hat, A3_hat, Q_hat),
// the auxiliary functions f1 / g1 used by integration by parts in time, and a
// certified lower bound on |phi| and |psi| over scan boxes.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vhkg/spectral_core.hpp"

namespace vhkg {

struct SymbolConfig {
  double d = 1.0;  // viscosity, d > 0
};

// <k> = sqrt(1 + k^2)
inline double japanese_bracket(double k) { return std::sqrt(1.0 + k * k); }

// lambda_hat(k) = -d k^2 - i <k>
Complex lambda_hat(const SymbolConfig& cfg, double k);

// Eigenvalues -a k^2 / 2 +- sqrt(a^2 k^4 / 4 - b^2 (g + k^2)) of the
// first-order formulation of the viscoelastic Klein-Gordon operator,
// returned as (lambda_plus, lambda_minus) with the principal square root.
std::pair<Complex, Complex> vkg_eigenvalues(double alpha, double beta, double gamma, double k);

// phi(k,l) = -lambda_hat(k) + lambda_hat(k-l) + lambda_hat(l)
//          = 2 d l (k-l) + i (<k> - <k-l> - <l>)
double phi_re(const SymbolConfig& cfg, double k, double l);
double phi_im(double k, double l);
Complex phi(const SymbolConfig& cfg, double k, double l);

// psi1(k,y) = d k^2 + i phi_im(k,y); never vanishes since phi_im < 0.
Complex psi1(const SymbolConfig& cfg, double k, double y);
// psi2(k,y,z) = d k^2 + i (phi_im(k,y) + phi_im(y,z))
Complex psi2(const SymbolConfig& cfg, double k, double y, double z);
// psi3(k,y,z) = phi(k,y) + phi(y,z)
Complex psi3(const SymbolConfig& cfg, double k, double y, double z);

// Bounded interaction kernel B_hat(k,l): either a constant or a tabulated
// bounded function with a declared sup bound. Tabulated kernels are bilinearly
// interpolated, magnitude-clamped to the bound, and constant-extended outside
// the table box so the L^inf hypothesis is preserved everywhere.
class KernelSpec {
 public:
  static KernelSpec constant(Complex c);
  // B_hat = 1 / (2 pi), the kernel of B(u,u) = u^2.
  static KernelSpec standard_quadratic();
  static KernelSpec zero();
  // Samples live on a uniform (n x n) lattice over [-S, S]^2, row-major in k.
  static KernelSpec tabulated(double box_half_width, int samples_per_axis,
                              std::vector<Complex> samples, double sup_bound);

  Complex eval(double k, double l) const;
  double sup_bound() const;
  bool is_constant() const { return constant_; }
  Complex constant_value() const;

 private:
  KernelSpec() = default;
  bool constant_ = true;
  Complex c_{0.0, 0.0};
  double box_ = 0.0;
  int n_ = 0;
  std::vector<Complex> samples_;
  double sup_ = 0.0;
};

// |denominator| below this threshold contradicts the phase certificate and is
// reported as a bug rather than propagated as Inf.
inline constexpr double kPhaseGuard = 1e-15;

// A2_hat(k,l) = B_hat(k,l) / phi(k,l)
Complex A2_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l);

// A3_hat(k,l,m) = [B_hat(k,m) B_hat(k-m,l-m) / phi(k,m)
//                  + B_hat(k,l) B_hat(l,m) / phi(k,l)] / (phi(k,l) + phi(l,m))
Complex A3_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l, double m);

// Q_hat(k,l,m,n) = A3_hat(k,m,n) B_hat(k-m,l-m) + A3_hat(k,l,n) B_hat(l-n,m-n)
//                  + A3_hat(k,l,m) B_hat(m,n)
Complex Q_hat(const SymbolConfig& cfg, const KernelSpec& kernel, double k, double l, double m,
              double n);

// f1(k,y) = psi1(k,y) / phi(k,y); symmetric under y -> k - y.
Complex f1(const SymbolConfig& cfg, double k, double y);
// g1(k,y,z) = psi2(k,y,z) / psi3(k,y,z); symmetric under z -> y - z and
// (y,z) -> (k-z, y-z).
Complex g1(const SymbolConfig& cfg, double k, double y, double z);

// Certified nonresonance bounds. The analytic constants come from the case
// analysis of the phase study; the grid minima come from exhaustive scans and
// must not undercut the analytic bounds by more than the Lipschitz slack.
struct PhaseCertificate {
  double d = 0.0;
  double delta = 0.0;           // convexity margin of <.>
  double phi0_analytic = 0.0;   // min(d/2, delta)
  double psi0_analytic = 0.0;   // min(d, 1, delta)
  double phi_grid_min = 0.0;
  double psi_grid_min = 0.0;
  double phi_box_half_width = 0.0;
  double phi_resolution = 0.0;
  double psi_box_half_width = 0.0;
  double psi_resolution = 0.0;
  double phi_scan_slack = 0.0;
  double psi_scan_slack = 0.0;
  double phi_im_max = 0.0;  // largest phi_im over the scan; must stay < 0

  bool holds() const;
};

struct CertificateViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scans |phi| over [-B, B]^2 and |psi| over the psi box, computes the analytic
// bounds, and throws CertificateViolation if any scanned point falls below
// bound - slack. Preconditions: box_half_width >= 4, resolutions <= 0.05.
PhaseCertificate certify_phase_bounds(const SymbolConfig& cfg, double box_half_width,
                                      double resolution, double psi_box_half_width = 6.0,
                                      double psi_resolution = 0.05);

}  // namespace vhkg
