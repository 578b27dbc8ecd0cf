#include "vhkg/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace vhkg {

SpectralField to_normal_form(const SymbolConfig& cfg, const KernelSpec& kernel,
                             const SpectralField& u) {
  // The bilinear weight is -A2_hat: with phi = -lambda(k)+lambda(k-l)+lambda(l)
  // the commutator condition [lambda, A2] = B fixes the kernel -B_hat/phi, and
  // the A3_hat formula already carries the matching sign.
  return u - apply_A2(cfg, kernel, u, u) + apply_A3(cfg, kernel, u, u, u);
}

NormalFormResidualReport normal_form_residual(const Trajectory& traj, const SymbolConfig& cfg,
                                              const KernelSpec& kernel,
                                              const std::vector<double>& checkpoints) {
  if (traj.blown_up) throw std::domain_error("normal_form_residual: trajectory blew up");
  if (!traj.config.dispersion_on)
    throw std::invalid_argument(
        "normal_form_residual: the transform needs the dispersive symbol (phi has zeros otherwise)");
  if (traj.frames.size() < 3)
    throw std::invalid_argument("normal_form_residual: need at least 3 stored frames");
  const double ds = traj.times[1] - traj.times[0];
  for (size_t i = 1; i < traj.times.size(); ++i) {
    if (std::abs(traj.times[i] - traj.times[i - 1] - ds) > 1e-9)
      throw std::invalid_argument("normal_form_residual: stored frames must be uniformly spaced");
  }

  std::vector<int> idx;
  if (checkpoints.empty()) {
    for (size_t i = 1; i + 1 < traj.times.size(); ++i) idx.push_back(static_cast<int>(i));
  } else {
    for (double tc : checkpoints) {
      int found = -1;
      for (size_t i = 0; i < traj.times.size(); ++i) {
        if (std::abs(traj.times[i] - tc) < 1e-9) {
          found = static_cast<int>(i);
          break;
        }
      }
      if (found <= 0 || found + 1 >= static_cast<int>(traj.times.size()))
        throw std::invalid_argument(
            "normal_form_residual: checkpoint must be an interior stored time");
      idx.push_back(found);
    }
  }

  // The A3 sweep dominates; transform each needed frame exactly once.
  std::map<int, SpectralField> w;
  auto w_at = [&](int i) -> const SpectralField& {
    auto it = w.find(i);
    if (it == w.end()) it = w.emplace(i, to_normal_form(cfg, kernel, traj.frames[i])).first;
    return it->second;
  };

  const double w0_l2 = norms(to_normal_form(cfg, kernel, traj.frames.front())).l2;
  const double floor = std::max(1e-300, 1e-16 * w0_l2);

  NormalFormResidualReport rep;
  rep.dt_used = traj.config.dt;
  for (int i : idx) {
    const SpectralField& wm = w_at(i - 1);
    const SpectralField& w0 = w_at(i);
    const SpectralField& wp = w_at(i + 1);
    const SpectralField qu = apply_Q(cfg, kernel, traj.frames[i]);
    SpectralField r = zero_field(w0.grid);
    for (int j = 0; j < r.size(); ++j) {
      const Complex dw = (wp.values[j] - wm.values[j]) / (2.0 * ds);
      r.values[j] =
          dw - lambda_hat(cfg, w0.grid.node(j)) * w0.values[j] - qu.values[j];
    }
    rep.times.push_back(traj.times[i]);
    rep.residual_l2.push_back(norms(r).l2 / std::max(norms(w0).l2, floor));
  }
  return rep;
}

double residual_convergence_order(const NormalFormResidualReport& coarse,
                                  const NormalFormResidualReport& fine) {
  if (coarse.times.size() != fine.times.size() || coarse.times.empty())
    throw std::invalid_argument("residual_convergence_order: mismatched checkpoint sets");
  for (size_t i = 0; i < coarse.times.size(); ++i) {
    if (std::abs(coarse.times[i] - fine.times[i]) > 1e-9)
      throw std::invalid_argument("residual_convergence_order: mismatched checkpoint times");
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t m = v.size();
    return (m % 2 == 1) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  };
  return std::log2(median(coarse.residual_l2) / median(fine.residual_l2));
}

}  // namespace vhkg
