#pragma once

// Frequency grids, spectral fields, quadrature norms and the discrete
// convolution engine. Every field in the library lives on a uniform
// symmetric grid over [-K, K]; integrals are trapezoid sums and all
// convolution-type operators treat fields as zero outside the grid.

#include <complex>
#include <vector>

namespace vhkg {

using Complex = std::complex<double>;

// Uniform symmetric discretization of [-K, K] with an odd number of nodes,
// so that k = 0 is a node. Nodes are k_j = (j - (N-1)/2) * dk.
struct FrequencyGrid {
  double cutoff = 0.0;   // K
  int count = 0;         // N, odd and >= 3
  double spacing = 0.0;  // dk = 2K / (N - 1)

  int center() const { return (count - 1) / 2; }
  double node(int j) const { return (j - center()) * spacing; }
  bool operator==(const FrequencyGrid&) const = default;
};

// Validates K > 0, N odd, N >= 3.
FrequencyGrid make_grid(double cutoff, int count);

// Complex samples u_hat(k_j) on a grid.
struct SpectralField {
  FrequencyGrid grid;
  std::vector<Complex> values;

  int size() const { return static_cast<int>(values.size()); }
};

SpectralField zero_field(const FrequencyGrid& grid);

// Fourier transform of eta * exp(-x^2) under the convention
// u_hat(k) = int exp(-ikx) u(x) dx, i.e. eta * sqrt(pi) * exp(-k^2 / 4).
SpectralField gaussian_profile(double eta, const FrequencyGrid& grid);

struct NormTriple {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

// Trapezoid L1/L2 quadrature norms and the node maximum of |u_hat|.
// Throws std::domain_error on non-finite entries.
NormTriple norms(const SpectralField& f);

// (f * g)(k_j) = dk * sum_m f(k_j - k_m) g(k_m), with f read as zero outside
// [-K, K] (no periodic wrap-around). Reference O(N^2) implementation.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(Complex c, const SpectralField& f);
SpectralField operator*(double c, const SpectralField& f);

namespace detail {

// FFT-accelerated linear convolution with 2x zero padding; agrees with
// convolve() to roundoff and is bitwise deterministic per grid size.
SpectralField convolve_fft(const SpectralField& f, const SpectralField& g);

// Norms without the finiteness check (blow-up monitoring); non-finite
// values are mapped to +inf.
NormTriple raw_norms(const SpectralField& f) noexcept;

bool all_finite(const SpectralField& f) noexcept;

void require_same_grid(const SpectralField& a, const SpectralField& b);

}  // namespace detail

}  // namespace vhkg
