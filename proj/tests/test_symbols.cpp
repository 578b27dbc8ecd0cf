#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vhkg/symbols.hpp"

using namespace vhkg;

namespace {

// Independently coded copies of the symbol algebra, built only from the
// lambda_hat formula. The library implementations must reproduce these.
Complex ref_lambda(double d, double k) { return Complex(-d * k * k, -std::sqrt(1.0 + k * k)); }

Complex ref_phi(double d, double k, double l) {
  return -ref_lambda(d, k) + ref_lambda(d, k - l) + ref_lambda(d, l);
}

Complex ref_a3(double d, Complex b, double k, double l, double m) {
  const Complex pre = 1.0 / (ref_phi(d, k, l) + ref_phi(d, l, m));
  return pre * (b * b / ref_phi(d, k, m) + b * b / ref_phi(d, k, l));
}

Complex ref_q(double d, Complex b, double k, double l, double m, double n) {
  return ref_a3(d, b, k, m, n) * b + ref_a3(d, b, k, l, n) * b + ref_a3(d, b, k, l, m) * b;
}

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("lambda_hat values and evenness") {
  CHECK(lambda_hat({1.0}, 0.0) == Complex(0.0, -1.0));
  const Complex v = lambda_hat({0.5}, 2.0);
  CHECK(v.real() == doctest::Approx(-2.0));
  CHECK(v.imag() == doctest::Approx(-std::sqrt(5.0)));
  for (double k : {0.3, 1.7, 4.0, 11.5}) CHECK(lambda_hat({1.0}, k) == lambda_hat({1.0}, -k));
}

TEST_CASE("vkg_eigenvalues special cases and Vieta") {
  {
    const auto [p, m] = vkg_eigenvalues(0.0, 1.0, 1.0, 0.0);
    CHECK(rel_err(p, Complex(0.0, 1.0)) < 1e-15);
    CHECK(rel_err(m, Complex(0.0, -1.0)) < 1e-15);
  }
  {
    const auto [p, m] = vkg_eigenvalues(2.0, 1.0, 1.0, 0.0);
    CHECK(p.real() == doctest::Approx(0.0));
    CHECK(rel_err(p, Complex(0.0, 1.0)) < 1e-15);
    CHECK(rel_err(m, Complex(0.0, -1.0)) < 1e-15);
  }
  {
    const auto [p, m] = vkg_eigenvalues(1.0, 0.0, 1.0, 1.0);
    CHECK(rel_err(p, Complex(0.0, 0.0)) < 1e-15);
    CHECK(rel_err(m, Complex(-1.0, 0.0)) < 1e-15);
  }
  // lambda+ + lambda- = -a k^2 and lambda+ lambda- = b^2 (g + k^2)
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = U(rng), b = U(rng), g = U(rng), k = U(rng) * 2.0 - 3.0;
    const auto [lp, lm] = vkg_eigenvalues(a, b, g, k);
    CHECK(std::abs(lp + lm - Complex(-a * k * k, 0.0)) <=
          1e-12 * std::max(1.0, std::abs(a * k * k)));
    const Complex prod_expect(b * b * (g + k * k), 0.0);
    CHECK(std::abs(lp * lm - prod_expect) <= 1e-12 * std::abs(prod_expect));
  }
}

TEST_CASE("phi values, symmetry and negativity of the imaginary part") {
  const SymbolConfig cfg{1.0};
  for (double k : {-3.0, 0.0, 0.7, 5.0}) {
    CHECK(rel_err(phi(cfg, k, 0.0), Complex(0.0, -1.0)) < 1e-14);
  }
  // phi_im(0, y) = 1 - 2 <y> <= -1
  for (double y : {0.0, 0.5, -1.3, 4.0}) {
    CHECK(phi_im(0.0, y) == doctest::Approx(1.0 - 2.0 * japanese_bracket(y)));
    CHECK(phi_im(0.0, y) <= -1.0);
  }
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = U(rng), l = U(rng);
    CHECK(rel_err(phi(cfg, k, l), ref_phi(1.0, k, l)) < 1e-14);
    CHECK(std::abs(phi(cfg, k, l) - phi(cfg, k, k - l)) <= 1e-13);
    CHECK(phi_im(k, l) < -1e-12);
  }
}

TEST_CASE("psi1 and psi2 never vanish") {
  // |a + ib| >= max(|a|, |b|) with b = phi_im < 0 keeps both away from zero
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (double d : {0.1, 1.0}) {
    const SymbolConfig cfg{d};
    for (int i = 0; i < 500; ++i) {
      const double k = U(rng), y = U(rng), z = U(rng);
      const Complex p1 = psi1(cfg, k, y);
      CHECK(std::abs(p1) >= std::max(d * k * k, -phi_im(k, y)) * (1.0 - 1e-15));
      CHECK(std::abs(p1) > 0.0);
      const Complex p2 = psi2(cfg, k, y, z);
      CHECK(std::abs(p2) > 0.0);
      CHECK(p2.imag() < 0.0);
    }
  }
}

TEST_CASE("psi2 / psi3 values and identities") {
  const SymbolConfig cfg{1.0};
  CHECK(rel_err(psi3(cfg, 2.0, 0.0, 0.0), Complex(0.0, -2.0)) < 1e-14);
  CHECK(rel_err(psi2(cfg, 0.0, 0.0, 0.0), Complex(0.0, -2.0)) < 1e-14);

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = U(rng), y = U(rng), z = U(rng);
    // psi2(0, y, z) has imaginary part <= -2
    CHECK(psi2(cfg, 0.0, y, z).imag() <= -2.0 + 1e-12);
    // definitional consistency
    CHECK(rel_err(psi3(cfg, k, y, z), phi(cfg, k, y) + phi(cfg, y, z)) < 1e-15);
    // substitution invariance of the imaginary part
    CHECK(psi3(cfg, k, k - z, y - z).imag() ==
          doctest::Approx(psi3(cfg, k, y, z).imag()).epsilon(1e-12));
    // algebraic identity behind the two expressions for g1
    const Complex lhs = psi2(cfg, k, y, z) -
                        Complex(cfg.d * (z * z + (y - z) * (y - z) + (k - y) * (k - y)), 0.0);
    CHECK(std::abs(lhs - psi3(cfg, k, y, z)) <= 1e-12);
  }
}

TEST_CASE("A2_hat examples") {
  const SymbolConfig cfg{1.0};
  const KernelSpec std_kernel = KernelSpec::standard_quadratic();
  // (1/2pi) / (-i) = i / (2 pi)
  CHECK(rel_err(A2_hat(cfg, std_kernel, 0.0, 0.0), Complex(0.0, 0.5 / M_PI)) < 1e-14);
  CHECK(A2_hat(cfg, KernelSpec::zero(), 1.3, -0.4) == Complex(0.0, 0.0));
  // direct substitution at (k, l) = (0, 1)
  const Complex expect = Complex(0.5 / M_PI, 0.0) / Complex(-2.0, 1.0 - 2.0 * std::sqrt(2.0));
  CHECK(rel_err(A2_hat(cfg, std_kernel, 0.0, 1.0), expect) < 1e-14);
}

TEST_CASE("A3_hat origin value and duplicate-implementation oracle") {
  const SymbolConfig cfg{1.0};
  const KernelSpec std_kernel = KernelSpec::standard_quadratic();
  CHECK(rel_err(A3_hat(cfg, std_kernel, 0.0, 0.0, 0.0), Complex(-0.25 / (M_PI * M_PI), 0.0)) <
        1e-13);
  CHECK(A3_hat(cfg, KernelSpec::zero(), 0.5, -0.3, 2.0) == Complex(0.0, 0.0));

  const Complex b(0.5 / M_PI, 0.0);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = U(rng), l = U(rng), m = U(rng);
    worst = std::max(worst, rel_err(A3_hat(cfg, std_kernel, k, l, m), ref_a3(1.0, b, k, l, m)));
    // degenerate slot l = m exercises the repeated phi(k,l) term
    worst = std::max(worst, rel_err(A3_hat(cfg, std_kernel, k, l, l), ref_a3(1.0, b, k, l, l)));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("Q_hat origin value and duplicate-implementation oracle") {
  const SymbolConfig cfg{1.0};
  const KernelSpec std_kernel = KernelSpec::standard_quadratic();
  const double expect = -3.0 / (8.0 * M_PI * M_PI * M_PI);
  CHECK(std::abs(Q_hat(cfg, std_kernel, 0.0, 0.0, 0.0, 0.0) - expect) < 1e-12);
  CHECK(Q_hat(cfg, KernelSpec::zero(), 1.0, 2.0, 3.0, 4.0) == Complex(0.0, 0.0));

  const Complex b(0.5 / M_PI, 0.0);
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = U(rng), l = U(rng), m = U(rng), n = U(rng);
    worst = std::max(worst, rel_err(Q_hat(cfg, std_kernel, k, l, m, n), ref_q(1.0, b, k, l, m, n)));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("f1 / g1 values and symmetries") {
  const SymbolConfig cfg{1.0};
  CHECK(rel_err(f1(cfg, 0.0, 0.0), Complex(1.0, 0.0)) < 1e-15);
  CHECK(rel_err(g1(cfg, 0.0, 0.0, 0.0), Complex(1.0, 0.0)) < 1e-15);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  double worst_f = 0.0, worst_g = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double k = U(rng), y = U(rng), z = U(rng);
    worst_f = std::max(worst_f, std::abs(f1(cfg, k, y) - f1(cfg, k, k - y)));
    worst_g = std::max(worst_g, std::abs(g1(cfg, k, y, z) - g1(cfg, k, y, y - z)));
    worst_g = std::max(worst_g, std::abs(g1(cfg, k, y, z) - g1(cfg, k, k - z, y - z)));
  }
  CHECK(worst_f <= 1e-14);
  CHECK(worst_g <= 1e-13);
}

TEST_CASE("kernel boundedness on sampled tuples") {
  const SymbolConfig cfg{1.0};
  const KernelSpec std_kernel = KernelSpec::standard_quadratic();
  const PhaseCertificate cert = certify_phase_bounds(cfg, 6.0, 0.05);
  const double sup_b = std_kernel.sup_bound();
  const double a2_bound = sup_b / cert.phi0_analytic;
  const double a3_bound = 2.0 * sup_b * sup_b / (cert.phi0_analytic * cert.psi0_analytic);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double k = U(rng), l = U(rng), m = U(rng), n = U(rng);
    CHECK(std::abs(A2_hat(cfg, std_kernel, k, l)) <= a2_bound * (1.0 + 1e-12));
    CHECK(std::abs(A3_hat(cfg, std_kernel, k, l, m)) <= a3_bound * (1.0 + 1e-12));
    CHECK(std::abs(Q_hat(cfg, std_kernel, k, l, m, n)) <= 3.0 * sup_b * a3_bound * (1.0 + 1e-12));
  }
}

TEST_CASE("tabulated kernels interpolate, clamp and validate") {
  // table of cos(k) sin(l) scaled, sup bound 0.2
  const int n = 41;
  const double box = 4.0;
  std::vector<Complex> vals(static_cast<size_t>(n) * n);
  auto fn = [](double k, double l) { return Complex(0.2 * std::cos(k) * std::sin(l), 0.0); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = -box + 2.0 * box * i / (n - 1);
      const double l = -box + 2.0 * box * j / (n - 1);
      vals[static_cast<size_t>(i) * n + j] = fn(k, l);
    }
  const KernelSpec tab = KernelSpec::tabulated(box, n, vals, 0.2);
  CHECK(tab.sup_bound() == doctest::Approx(0.2));
  CHECK(!tab.is_constant());
  // exact at sample points (lattice spacing is 0.2), close in between
  CHECK(std::abs(tab.eval(0.2, 1.0) - fn(0.2, 1.0)) < 1e-15);
  const Complex mid = tab.eval(0.05, -1.23);
  CHECK(std::abs(mid - fn(0.05, -1.23)) < 5e-3);
  // clamped outside the box (constant extension keeps the bound)
  CHECK(std::abs(tab.eval(100.0, -50.0)) <= 0.2 + 1e-15);
  for (int i = 0; i < 100; ++i) {
    const double k = -10.0 + 0.2 * i, l = 7.0 - 0.13 * i;
    CHECK(std::abs(tab.eval(k, l)) <= 0.2 + 1e-15);
  }
  // declared bound must dominate the samples
  std::vector<Complex> bad = vals;
  bad[0] = Complex(0.5, 0.0);
  CHECK_THROWS_AS(KernelSpec::tabulated(box, n, bad, 0.2), std::invalid_argument);
}

TEST_CASE("phase certificate: analytic constants") {
  const PhaseCertificate c1 = certify_phase_bounds({1.0}, 6.0, 0.05);
  const double delta_exact = std::sqrt(5.0) / 2.0 - std::sqrt(0.5);
  CHECK(c1.delta == doctest::Approx(delta_exact).epsilon(1e-9));
  CHECK(c1.phi0_analytic == doctest::Approx(delta_exact).epsilon(1e-9));  // d/2 = 0.5 > delta
  CHECK(std::abs(c1.phi0_analytic - 0.41086) <= 1e-4);
  CHECK(c1.psi0_analytic == doctest::Approx(std::min(1.0, delta_exact)).epsilon(1e-9));
  CHECK(c1.holds());
  CHECK(c1.phi_im_max < 0.0);

  const PhaseCertificate c01 = certify_phase_bounds({0.1}, 6.0, 0.05);
  CHECK(c01.phi0_analytic == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(c01.psi0_analytic == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c01.holds());
}

TEST_CASE("phase certificate: grid minima respect the analytic bounds") {
  for (double d : {0.1, 1.0, 10.0}) {
    const PhaseCertificate c = certify_phase_bounds({d}, 5.0, 0.05, 4.0, 0.05);
    CHECK(c.phi_grid_min >= c.phi0_analytic - c.phi_scan_slack);
    CHECK(c.psi_grid_min >= c.psi0_analytic - c.psi_scan_slack);
    // the scanned minima themselves must already obey the pointwise bound
    CHECK(c.phi_grid_min >= c.phi0_analytic - 1e-12);
    CHECK(c.psi_grid_min >= c.psi0_analytic - 1e-12);
  }
}

TEST_CASE("phase certificate: preconditions") {
  CHECK_THROWS_AS(certify_phase_bounds({1.0}, 3.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(certify_phase_bounds({1.0}, 6.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(certify_phase_bounds({-1.0}, 6.0, 0.05), std::invalid_argument);
}
