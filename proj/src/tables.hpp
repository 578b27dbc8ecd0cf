#pragma once

// Internal precomputed tables shared by the sweep kernels in nonlinear_ops.cpp
// and evolution.cpp. Not part of the public interface.

#include <vector>

#include "vhkg/spectral_core.hpp"
#include "vhkg/symbols.hpp"

namespace vhkg::detail {

// phi and 1/phi over all grid node pairs, split into real/imag arrays so the
// sweep inner loops vectorize.
struct PhasePairTable {
  int n = 0;
  std::vector<double> phi_re, phi_im;  // [a * n + b] = phi(k_a, k_b)
  std::vector<double> inv_re, inv_im;  // 1 / phi(k_a, k_b)

  PhasePairTable(const SymbolConfig& cfg, const FrequencyGrid& grid) : n(grid.count) {
    const size_t sz = static_cast<size_t>(n) * n;
    phi_re.resize(sz);
    phi_im.resize(sz);
    inv_re.resize(sz);
    inv_im.resize(sz);
    // Brackets of all pairwise node differences live on the doubled lattice.
    std::vector<double> jb(n), jbd(2 * n - 1);
    for (int i = 0; i < n; ++i) jb[i] = japanese_bracket(grid.node(i));
    for (int i = 0; i < 2 * n - 1; ++i)
      jbd[i] = japanese_bracket((i - (n - 1)) * grid.spacing);
    for (int a = 0; a < n; ++a) {
      const double ka = grid.node(a);
      for (int b = 0; b < n; ++b) {
        const double kb = grid.node(b);
        const double re = 2.0 * cfg.d * kb * (ka - kb);
        const double im = jb[a] - jbd[a - b + n - 1] - jb[b];
        const size_t idx = static_cast<size_t>(a) * n + b;
        phi_re[idx] = re;
        phi_im[idx] = im;
        const double inv = 1.0 / (re * re + im * im);
        inv_re[idx] = re * inv;
        inv_im[idx] = -im * inv;
      }
    }
  }
};

}  // namespace vhkg::detail
