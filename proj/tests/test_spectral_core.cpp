#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vhkg/spectral_core.hpp"

using namespace vhkg;

namespace {

// Fields supported well inside [-K, K] keep endpoint weights out of the picture.
SpectralField random_interior_field(const FrequencyGrid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralField f = zero_field(grid);
  const int c = grid.center();
  for (int j = c - c / 2; j <= c + c / 2; ++j) f.values[j] = Complex(g(rng), g(rng));
  return f;
}

}  // namespace

TEST_CASE("make_grid basic invariants") {
  const FrequencyGrid g = make_grid(1.0, 3);
  CHECK(g.spacing == doctest::Approx(1.0));
  CHECK(g.node(0) == doctest::Approx(-1.0));
  CHECK(g.node(1) == 0.0);  // exact
  CHECK(g.node(2) == doctest::Approx(1.0));

  const FrequencyGrid g2 = make_grid(32.0, 2049);
  CHECK(g2.spacing == doctest::Approx(0.03125));
  CHECK(g2.node(g2.center()) == 0.0);

  CHECK_THROWS_AS(make_grid(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-2.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 1), std::invalid_argument);
}

TEST_CASE("gaussian_profile matches the closed-form transform") {
  const FrequencyGrid g = make_grid(8.0, 129);
  const SpectralField f = gaussian_profile(1.0, g);
  CHECK(f.values[g.center()].real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(f.values[g.center()].imag() == 0.0);

  const SpectralField f2 = gaussian_profile(2.0, g);
  // k = 2 is a node: 2 sqrt(pi) e^{-1}
  const int j2 = g.center() + static_cast<int>(std::lround(2.0 / g.spacing));
  CHECK(g.node(j2) == doctest::Approx(2.0));
  CHECK(f2.values[j2].real() == doctest::Approx(2.0 * std::sqrt(M_PI) * std::exp(-1.0)).epsilon(1e-14));

  const SpectralField fz = gaussian_profile(0.0, g);
  for (const Complex& v : fz.values) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("norms: zero, indicator, Gaussian quadrature") {
  const FrequencyGrid g3 = make_grid(1.0, 3);
  const NormTriple z = norms(zero_field(g3));
  CHECK(z.l1 == 0.0);
  CHECK(z.l2 == 0.0);
  CHECK(z.linf == 0.0);

  SpectralField ind = zero_field(g3);
  for (Complex& v : ind.values) v = 1.0;
  const NormTriple ni = norms(ind);
  CHECK(ni.l1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ni.linf == doctest::Approx(1.0));

  // integral of sqrt(pi) e^{-k^2/4} over R is 2 pi
  const FrequencyGrid g = make_grid(32.0, 4097);
  const NormTriple ng = norms(gaussian_profile(1.0, g));
  CHECK(std::abs(ng.l1 - 2.0 * M_PI) < 1e-6);
}

TEST_CASE("norms reject non-finite fields") {
  SpectralField f = zero_field(make_grid(1.0, 5));
  f.values[2] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(norms(f), std::domain_error);
  f.values[2] = Complex(0.0, HUGE_VAL);
  CHECK_THROWS_AS(norms(f), std::domain_error);
}

TEST_CASE("discrete interpolation l2^2 <= l1 * linf") {
  const FrequencyGrid g = make_grid(8.0, 257);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const SpectralField f = random_interior_field(g, seed);
    const NormTriple n = norms(f);
    CHECK(n.l2 * n.l2 <= n.l1 * n.linf * (1.0 + 1e-12));
  }
}

TEST_CASE("convolve: delta column is a discrete identity") {
  const FrequencyGrid g = make_grid(4.0, 33);
  SpectralField delta = zero_field(g);
  delta.values[g.center()] = 1.0 / g.spacing;
  const SpectralField r = convolve(delta, delta);
  for (int j = 0; j < r.size(); ++j) {
    if (j == g.center())
      CHECK(r.values[j].real() == doctest::Approx(1.0 / g.spacing).epsilon(1e-14));
    else
      CHECK(std::abs(r.values[j]) == 0.0);
  }
}

TEST_CASE("convolve: Gaussian self-convolution oracle") {
  // conv of sqrt(pi) e^{-k^2/4} with itself is 2 pi sqrt(pi/2) e^{-k^2/8}
  const FrequencyGrid g = make_grid(24.0, 769);
  const SpectralField f = gaussian_profile(1.0, g);
  const SpectralField r = convolve(f, f);
  const double amp = 2.0 * M_PI * std::sqrt(0.5 * M_PI);
  for (int j = 0; j < r.size(); j += 16) {
    const double k = g.node(j);
    const double expect = amp * std::exp(-k * k / 8.0);
    CHECK(std::abs(r.values[j] - expect) < 1e-8);
  }
}

TEST_CASE("convolve: zero absorbs and grids must match") {
  const FrequencyGrid g = make_grid(4.0, 33);
  const SpectralField f = gaussian_profile(1.0, g);
  const SpectralField r = convolve(f, zero_field(g));
  for (const Complex& v : r.values) CHECK(std::abs(v) == 0.0);
  CHECK_THROWS_AS(convolve(f, zero_field(make_grid(4.0, 35))), std::invalid_argument);
}

TEST_CASE("convolve is bilinear and commutative") {
  const FrequencyGrid g = make_grid(6.0, 97);
  const SpectralField a = random_interior_field(g, 11);
  const SpectralField b = random_interior_field(g, 12);
  const SpectralField c = random_interior_field(g, 13);

  const SpectralField ab = convolve(a, b);
  const SpectralField ba = convolve(b, a);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < ab.size(); ++j) {
    worst = std::max(worst, std::abs(ab.values[j] - ba.values[j]));
    scale = std::max(scale, std::abs(ab.values[j]));
  }
  CHECK(worst <= 1e-13 * std::max(scale, 1.0));

  const SpectralField lhs = convolve(a, b + c);
  const SpectralField rhs = convolve(a, b) + convolve(a, c);
  for (int j = 0; j < lhs.size(); ++j)
    CHECK(std::abs(lhs.values[j] - rhs.values[j]) <= 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("discrete Young inequality with endpoint weights") {
  const FrequencyGrid g = make_grid(8.0, 257);
  for (unsigned seed = 3; seed <= 8; ++seed) {
    const SpectralField f = random_interior_field(g, seed);
    const SpectralField h = random_interior_field(g, seed + 100);
    const NormTriple nc = norms(convolve(f, h));
    CHECK(nc.l1 <= norms(f).l1 * norms(h).l1 * (1.0 + 1e-10));
  }
}

TEST_CASE("quadrature convergence for the Gaussian l1 integral") {
  // halving dk cuts the error against 2 pi by >= 4x until it hits roundoff
  const double target = 2.0 * M_PI;
  double prev = -1.0;
  for (int n : {21, 41, 81, 161}) {
    const FrequencyGrid g = make_grid(20.0, n);
    const double err = std::abs(norms(gaussian_profile(1.0, g)).l1 - target);
    if (prev >= 0.0) {
      const bool at_floor = err <= 1e-12 * target;
      CHECK((err <= prev / 4.0 || at_floor));
    }
    prev = err;
  }
}

TEST_CASE("zero-padding: half-supported inputs convolve without truncation loss") {
  const FrequencyGrid g = make_grid(8.0, 129);
  const FrequencyGrid g2 = make_grid(16.0, 257);  // same spacing, doubled span
  REQUIRE(g.spacing == doctest::Approx(g2.spacing));
  const SpectralField a = random_interior_field(g, 21);
  const SpectralField b = random_interior_field(g, 22);
  SpectralField a2 = zero_field(g2), b2 = zero_field(g2);
  const int off = g2.center() - g.center();
  for (int j = 0; j < g.count; ++j) {
    a2.values[j + off] = a.values[j];
    b2.values[j + off] = b.values[j];
  }
  const SpectralField r = convolve(a, b);
  const SpectralField r2 = convolve(a2, b2);
  double scale = 0.0;
  for (const Complex& v : r.values) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < g.count; ++j)
    CHECK(std::abs(r.values[j] - r2.values[j + off]) <= 1e-13 * std::max(scale, 1.0));
}

TEST_CASE("FFT convolution path agrees with the reference") {
  const FrequencyGrid g = make_grid(8.0, 257);
  const SpectralField a = random_interior_field(g, 31);
  const SpectralField b = random_interior_field(g, 32);
  const SpectralField ref = convolve(a, b);
  const SpectralField fast = detail::convolve_fft(a, b);
  double scale = 0.0;
  for (const Complex& v : ref.values) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < ref.size(); ++j)
    CHECK(std::abs(ref.values[j] - fast.values[j]) <= 1e-12 * std::max(scale, 1.0));

  // squaring path (f == g)
  const SpectralField sq_ref = convolve(a, a);
  const SpectralField sq_fast = detail::convolve_fft(a, a);
  for (int j = 0; j < sq_ref.size(); ++j)
    CHECK(std::abs(sq_ref.values[j] - sq_fast.values[j]) <= 1e-12 * std::max(scale, 1.0));
}
