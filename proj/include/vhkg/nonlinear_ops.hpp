#pragma once

// Application of the quadratic, cubic and quartic interaction operators to
// spectral fields, plus an empirical harness for their multilinear L^p bounds.

#include <cstdint>

#include "vhkg/spectral_core.hpp"
#include "vhkg/symbols.hpp"

namespace vhkg {

// F(B(u,v))(k) = dk * sum_m B_hat(k, k_m) u(k - k_m) v(k_m). Constant kernels
// go through the FFT convolution; general kernels through direct quadrature.
SpectralField apply_B(const KernelSpec& kernel, const SpectralField& u, const SpectralField& v);
SpectralField apply_B(const KernelSpec& kernel, const SpectralField& u);

// A2_hat-weighted bilinear quadrature.
SpectralField apply_A2(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u,
                       const SpectralField& v);

// A3_hat-weighted trilinear quadrature (double frequency integral).
SpectralField apply_A3(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u1,
                       const SpectralField& u2, const SpectralField& u3);

// T(u) = A2(B(u,u), u) + A2(u, B(u,u)), evaluated by composition.
SpectralField apply_T(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u);
// Merged double-quadrature form of T with the combined cubic kernel;
// cross-validation path.
SpectralField apply_T_direct(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u);

// Q(u) = A3(B(u,u),u,u) + A3(u,B(u,u),u) + A3(u,u,B(u,u)), evaluated by
// composition with a fused kernel sweep.
SpectralField apply_Q(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u);
// Brute-force quadruple quadrature against Q_hat; oracle only, rejects N > 129.
SpectralField apply_Q_direct(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u);

enum class OperatorId { B, A2, A3, Q };
enum class LebesgueExponent { p1, p2, pinf };

struct MultilinearEstimateReport {
  OperatorId op = OperatorId::B;
  LebesgueExponent p = LebesgueExponent::p1;
  double empirical_constant = 0.0;  // max over the ensemble of lhs / rhs
  int ensemble_size = 0;
  std::uint64_t seed = 0;
};

// Complex Gaussian field supported on |k| <= K/2 with u_hat normalized to
// ||u_hat||_1 = 1; deterministic in the seed.
SpectralField random_band_limited_field(const FrequencyGrid& grid, std::uint64_t seed);

// Max over an ensemble of ||F(op(u))||_p / (||u_hat||_1^{deg-1} ||u_hat||_p).
// Member seeds derive from the master seed, so an ensemble extends a shorter
// one with the same seed. Degenerate (zero-norm) members are skipped.
MultilinearEstimateReport estimate_multilinear_constant(const SymbolConfig& cfg,
                                                        const KernelSpec& kernel,
                                                        const FrequencyGrid& grid, OperatorId op,
                                                        LebesgueExponent p, int ensemble_size,
                                                        std::uint64_t seed);

double pick_norm(const NormTriple& n, LebesgueExponent p);

}  // namespace vhkg
