#pragma once

// The change of variables w = u + A2(u,u) + A3(u,u,u) and a discrete check
// that w solves the transformed equation dw/dt - lambda w = Q(u).

#include <optional>
#include <vector>

#include "vhkg/evolution.hpp"

namespace vhkg {

// w_hat = u_hat + F(A2(u,u)) + F(A3(u,u,u))
SpectralField to_normal_form(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u);

struct NormalFormResidualReport {
  std::vector<double> times;
  std::vector<double> residual_l2;  // ||r||_2 / max(||w||_2, floor)
  double dt_used = 0.0;
  std::optional<double> convergence_order;  // filled when two dt levels were run
};

// At each checkpoint (default: every interior stored time) forms
//   r = (w(t+ds) - w(t-ds)) / (2 ds) - lambda_hat w(t) - F(Q(u(t)))
// from centered differences on the stored frames. Checkpoints must be stored
// times with both neighbors stored; frames must be uniformly spaced.
NormalFormResidualReport normal_form_residual(const Trajectory& traj, const SymbolConfig& cfg,
                                              const KernelSpec& kernel,
                                              const std::vector<double>& checkpoints = {});

// log2(median residual ratio) between a run and its dt-halved companion;
// both reports must cover the same checkpoint times.
double residual_convergence_order(const NormalFormResidualReport& coarse,
                                  const NormalFormResidualReport& fine);

}  // namespace vhkg
