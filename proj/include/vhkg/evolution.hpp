#pragma once

// Time integration of the spectral equation du/dt = lambda_hat u + F(B(u,u)),
// trajectory bookkeeping, the template function, decay-rate fitting, linear
// semigroup diagnostics and the two Duhamel reconstructions.

#include <optional>
#include <ostream>
#include <vector>

#include "vhkg/nonlinear_ops.hpp"
#include "vhkg/spectral_core.hpp"
#include "vhkg/symbols.hpp"

namespace vhkg {

struct RunConfig {
  SymbolConfig cfg;
  KernelSpec kernel = KernelSpec::standard_quadratic();
  FrequencyGrid grid;
  double dt = 0.0;
  double t_end = 0.0;
  int store_every = 1;
  bool dispersion_on = true;  // false replaces lambda_hat by -d k^2
  double blowup_factor = 1e3;
  double eta = 0.0;  // Gaussian initial amplitude
};

struct Trajectory {
  RunConfig config;
  std::vector<double> times;             // stored frame times
  std::vector<SpectralField> frames;     // stored u_hat frames
  std::vector<NormTriple> norm_history;  // every step; entry i is t = i * dt
  bool blown_up = false;
  std::optional<double> blowup_time;

  double step_time(int i) const { return i * config.dt; }
};

// Pointwise multiplication by exp(t * lambda_hat(k)) (or exp(-t d k^2) with
// dispersion off). Exact for any t >= 0.
SpectralField linear_propagate(const SymbolConfig& cfg, const SpectralField& u, double t,
                               bool dispersion_on);

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, with a series branch for
// small |z| to avoid cancellation.
Complex etd_phi1(Complex z);
Complex etd_phi2(Complex z);

// One step of the second-order exponential Runge-Kutta scheme.
SpectralField step_etd(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u,
                       double dt, bool dispersion_on);

// Fixed-step march from Gaussian data until t_end, a blow-up trip
// (||u_hat||_1 >= blowup_factor * ||u_hat(0)||_1 or a non-finite state),
// whichever comes first. Blow-up is an outcome, not an error.
Trajectory simulate(const RunConfig& run);

// Theta(t_i) = max_{s <= t_i} (||u_hat(s)||_inf + sqrt(1+s) ||u_hat(s)||_1),
// one entry per step. Throws on blown-up trajectories.
std::vector<double> theta_template(const Trajectory& traj);

enum class NormId { l1_hat, l2_hat, linf_hat, l2_x, linf_x };

struct DecayReport {
  NormId norm_id = NormId::l1_hat;
  double fitted_exponent = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  double r_squared = 0.0;
  double theta_sup = 0.0;
  double e0 = 0.0;  // ||u_hat(0)||_{L1 cap Linf}
};

// Least-squares slope of log(norm) against log(1+t) over [t_lo, t_hi];
// needs at least 20 samples in the window.
DecayReport fit_decay(const Trajectory& traj, NormId norm_id, double t_lo, double t_hi);
// Default window [t_end / 10, t_end].
DecayReport fit_decay(const Trajectory& traj, NormId norm_id);

// max over `times` of (1+t)^{1/(2p)} ||e^{t lambda} u0||_p / ||u0||_{L^p cap Linf}
// (exponent 0 for p = inf).
double check_linear_bound(const SymbolConfig& cfg, const SpectralField& u0, LebesgueExponent p,
                          const std::vector<double>& times);

// v(t,k) = exp(i <k> t) u_hat(t,k) for every stored frame.
std::vector<SpectralField> v_transform(const Trajectory& traj);

enum class DuhamelForm { original, integrated_by_parts };

struct DuhamelResidual {
  double time = 0.0;
  double residual = 0.0;  // ||reconstructed - v(t)||_2 / ||v(t)||_2
};

// Reconstructs v at the requested stored checkpoints (default: the last
// stored time) from the chosen Duhamel identity, using composite trapezoid
// over the stored frames for the time integrals. Requires a constant kernel,
// store spacing <= 0.1, and (for the quartic form) N <= 129.
std::vector<DuhamelResidual> duhamel_residual(const Trajectory& traj, DuhamelForm form,
                                              std::vector<double> checkpoints = {});

// CSV with header t,l1_hat,l2_hat,linf_hat,theta; one row per step.
void write_norms_csv(const Trajectory& traj, std::ostream& os);
// CSV with header k,re,im for one stored frame.
void write_frame_csv(const SpectralField& f, std::ostream& os);

}  // namespace vhkg
