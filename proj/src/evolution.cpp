#include "vhkg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tables.hpp"

namespace vhkg {

namespace {

Complex lambda_eff(const SymbolConfig& cfg, double k, bool dispersion_on) {
  return dispersion_on ? lambda_hat(cfg, k) : Complex(-cfg.d * k * k, 0.0);
}

}  // namespace

SpectralField linear_propagate(const SymbolConfig& cfg, const SpectralField& u, double t,
                               bool dispersion_on) {
  if (t < 0.0) throw std::invalid_argument("linear_propagate: t must be nonnegative");
  SpectralField r = u;
  for (int j = 0; j < u.size(); ++j)
    r.values[j] *= std::exp(t * lambda_eff(cfg, u.grid.node(j), dispersion_on));
  return r;
}

Complex etd_phi1(Complex z) {
  if (std::abs(z) < 1e-2) {
    // 1 + z/2 + z^2/6 + ... ; truncation below eps at the branch point
    Complex s = 1.0, term = 1.0;
    const double den[] = {2, 3, 4, 5, 6, 7};
    for (double d : den) {
      term *= z / d;
      s += term;
    }
    return s;
  }
  return (std::exp(z) - 1.0) / z;
}

Complex etd_phi2(Complex z) {
  if (std::abs(z) < 1e-2) {
    Complex s = 0.5, term = 0.5;
    const double den[] = {3, 4, 5, 6, 7, 8};
    for (double d : den) {
      term *= z / d;
      s += term;
    }
    return s;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

SpectralField step_etd(const SymbolConfig& cfg, const KernelSpec& kernel, const SpectralField& u,
                       double dt, bool dispersion_on) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_etd: dt must be positive");
  const int n = u.size();
  std::vector<Complex> ez(n), f1(n), f2(n);
  for (int j = 0; j < n; ++j) {
    const Complex z = dt * lambda_eff(cfg, u.grid.node(j), dispersion_on);
    ez[j] = std::exp(z);
    f1[j] = etd_phi1(z);
    f2[j] = etd_phi2(z);
  }
  const SpectralField nu = apply_B(kernel, u);
  SpectralField stage = zero_field(u.grid);
  for (int j = 0; j < n; ++j) stage.values[j] = ez[j] * u.values[j] + dt * f1[j] * nu.values[j];
  if (!detail::all_finite(stage)) return stage;  // invalid step; blow-up monitor takes over
  const SpectralField ns = apply_B(kernel, stage);
  SpectralField r = zero_field(u.grid);
  for (int j = 0; j < n; ++j)
    r.values[j] = ez[j] * u.values[j] +
                  dt * ((f1[j] - f2[j]) * nu.values[j] + f2[j] * ns.values[j]);
  return r;
}

Trajectory simulate(const RunConfig& run) {
  if (!(run.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(run.t_end >= run.dt)) throw std::invalid_argument("simulate: t_end must be >= dt");
  if (run.store_every < 1) throw std::invalid_argument("simulate: store_every must be >= 1");
  if (!(run.blowup_factor > 0.0))
    throw std::invalid_argument("simulate: blowup_factor must be positive");
  if (!std::isfinite(run.eta)) throw std::invalid_argument("simulate: eta must be finite");
  if (run.grid.count < 3) throw std::invalid_argument("simulate: invalid grid");

  Trajectory traj;
  traj.config = run;
  SpectralField u = gaussian_profile(run.eta, run.grid);
  const NormTriple n0 = detail::raw_norms(u);
  traj.norm_history.push_back(n0);
  traj.times.push_back(0.0);
  traj.frames.push_back(u);

  const int n_steps = static_cast<int>(std::ceil(run.t_end / run.dt - 1e-9));
  for (int i = 1; i <= n_steps; ++i) {
    u = step_etd(run.cfg, run.kernel, u, run.dt, run.dispersion_on);
    const bool finite = detail::all_finite(u);
    const NormTriple nt = detail::raw_norms(u);
    traj.norm_history.push_back(nt);
    const double t = i * run.dt;
    if (!finite || (n0.l1 > 0.0 && nt.l1 >= run.blowup_factor * n0.l1)) {
      traj.blown_up = true;
      traj.blowup_time = t;
      traj.times.push_back(t);
      traj.frames.push_back(u);
      break;
    }
    if (i % run.store_every == 0 || i == n_steps) {
      traj.times.push_back(t);
      traj.frames.push_back(u);
    }
  }
  return traj;
}

std::vector<double> theta_template(const Trajectory& traj) {
  if (traj.blown_up) throw std::domain_error("theta_template: trajectory blew up");
  std::vector<double> theta(traj.norm_history.size());
  double sup = 0.0;
  for (size_t i = 0; i < traj.norm_history.size(); ++i) {
    const double t = traj.step_time(static_cast<int>(i));
    const NormTriple& n = traj.norm_history[i];
    sup = std::max(sup, n.linf + std::sqrt(1.0 + t) * n.l1);
    theta[i] = sup;
  }
  return theta;
}

namespace {

double norm_value(const NormTriple& n, NormId id) {
  switch (id) {
    case NormId::l1_hat: return n.l1;
    case NormId::l2_hat: return n.l2;
    case NormId::linf_hat: return n.linf;
    case NormId::l2_x: return n.l2 / std::sqrt(2.0 * M_PI);
    default: return n.l1 / (2.0 * M_PI);  // linf_x proxy, |u|_inf <= |u_hat|_1 / (2 pi)
  }
}

}  // namespace

DecayReport fit_decay(const Trajectory& traj, NormId norm_id, double t_lo, double t_hi) {
  if (traj.blown_up) throw std::domain_error("fit_decay: trajectory blew up");
  const double run_end = traj.step_time(static_cast<int>(traj.norm_history.size()) - 1);
  if (!(t_lo >= 0.0 && t_hi > t_lo && t_hi <= run_end + 1e-9))
    throw std::invalid_argument("fit_decay: window must lie inside the run");
  std::vector<double> xs, ys;
  for (size_t i = 0; i < traj.norm_history.size(); ++i) {
    const double t = traj.step_time(static_cast<int>(i));
    if (t < t_lo || t > t_hi) continue;
    const double v = norm_value(traj.norm_history[i], norm_id);
    if (!(v > 0.0)) continue;
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 20) throw std::invalid_argument("fit_decay: fewer than 20 usable samples");
  const size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayReport rep;
  rep.norm_id = norm_id;
  rep.window_lo = t_lo;
  rep.window_hi = t_hi;
  rep.fitted_exponent = sxy / sxx;
  rep.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  const std::vector<double> theta = theta_template(traj);
  rep.theta_sup = theta.back();
  rep.e0 = std::max(traj.norm_history.front().l1, traj.norm_history.front().linf);
  return rep;
}

DecayReport fit_decay(const Trajectory& traj, NormId norm_id) {
  const double run_end = traj.step_time(static_cast<int>(traj.norm_history.size()) - 1);
  return fit_decay(traj, norm_id, run_end / 10.0, run_end);
}

double check_linear_bound(const SymbolConfig& cfg, const SpectralField& u0, LebesgueExponent p,
                          const std::vector<double>& times) {
  const NormTriple n0 = norms(u0);
  const double denom = std::max(pick_norm(n0, p), n0.linf);
  if (!(denom > 0.0)) throw std::invalid_argument("check_linear_bound: zero initial datum");
  double expo = 0.0;
  if (p == LebesgueExponent::p1) expo = 0.5;
  if (p == LebesgueExponent::p2) expo = 0.25;
  double worst = 0.0;
  for (double t : times) {
    const SpectralField ut = linear_propagate(cfg, u0, t, true);
    const double val = std::pow(1.0 + t, expo) * pick_norm(norms(ut), p) / denom;
    worst = std::max(worst, val);
  }
  return worst;
}

std::vector<SpectralField> v_transform(const Trajectory& traj) {
  std::vector<SpectralField> out;
  out.reserve(traj.frames.size());
  for (size_t i = 0; i < traj.frames.size(); ++i) {
    const double t = traj.times[i];
    SpectralField v = traj.frames[i];
    for (int j = 0; j < v.size(); ++j) {
      const double ph = japanese_bracket(v.grid.node(j)) * t;
      v.values[j] *= Complex(std::cos(ph), std::sin(ph));
    }
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

// exp(i * phi_im(k_a, k_b) * s) over all grid pairs.
std::vector<Complex> phase_factor_table(const detail::PhasePairTable& tab, double s) {
  std::vector<Complex> e(tab.phi_im.size());
  for (size_t i = 0; i < e.size(); ++i) {
    const double ph = tab.phi_im[i] * s;
    e[i] = Complex(std::cos(ph), std::sin(ph));
  }
  return e;
}

// dk * sum_y phase(j,y) * a(j-y) * a(y)
SpectralField twisted_square(const std::vector<Complex>& phase, const SpectralField& a) {
  const int n = a.size();
  const int cen = a.grid.center();
  SpectralField r = zero_field(a.grid);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    const int y_lo = std::max(0, j + cen - (n - 1));
    const int y_hi = std::min(n - 1, j + cen);
    for (int y = y_lo; y <= y_hi; ++y)
      acc += phase[static_cast<size_t>(j) * n + y] * a.values[j - y + cen] * a.values[y];
    r.values[j] = a.grid.spacing * acc;
  }
  return r;
}

// dk * sum_y phase(j,y) / phi(j,y) * a(j-y) * a(y)
SpectralField weighted_square(const detail::PhasePairTable& tab, const std::vector<Complex>* phase,
                              const SpectralField& a) {
  const int n = a.size();
  const int cen = a.grid.center();
  SpectralField r = zero_field(a.grid);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    const int y_lo = std::max(0, j + cen - (n - 1));
    const int y_hi = std::min(n - 1, j + cen);
    for (int y = y_lo; y <= y_hi; ++y) {
      const size_t idx = static_cast<size_t>(j) * n + y;
      Complex w(tab.inv_re[idx], tab.inv_im[idx]);
      if (phase) w *= (*phase)[idx];
      acc += w * a.values[j - y + cen] * a.values[y];
    }
    r.values[j] = a.grid.spacing * acc;
  }
  return r;
}

// dk^2 * sum_{y,z} phase(j,y) phase(y,z) / (phi(j,y) psi3(j,y,z)) * a(j-y) a(y-z) a(z)
SpectralField weighted_cube(const detail::PhasePairTable& tab, const std::vector<Complex>* phase,
                            const SpectralField& a) {
  const int n = a.size();
  const int cen = a.grid.center();
  SpectralField r = zero_field(a.grid);
  for (int j = 0; j < n; ++j) {
    Complex acc = 0.0;
    const int y_lo = std::max(0, j + cen - (n - 1));
    const int y_hi = std::min(n - 1, j + cen);
    for (int y = y_lo; y <= y_hi; ++y) {
      const Complex ay = a.values[j - y + cen];
      if (ay == Complex(0.0, 0.0)) continue;
      const size_t jy = static_cast<size_t>(j) * n + y;
      const Complex phi_jy(tab.phi_re[jy], tab.phi_im[jy]);
      Complex w_jy(tab.inv_re[jy], tab.inv_im[jy]);
      if (phase) w_jy *= (*phase)[jy];
      Complex inner = 0.0;
      const int z_lo = std::max(0, y + cen - (n - 1));
      const int z_hi = std::min(n - 1, y + cen);
      for (int z = z_lo; z <= z_hi; ++z) {
        const size_t yz = static_cast<size_t>(y) * n + z;
        const Complex psi = phi_jy + Complex(tab.phi_re[yz], tab.phi_im[yz]);
        Complex term = a.values[y - z + cen] * a.values[z] / psi;
        if (phase) term *= (*phase)[yz];
        inner += term;
      }
      acc += ay * w_jy * inner;
    }
    r.values[j] = a.grid.spacing * a.grid.spacing * acc;
  }
  return r;
}

}  // namespace

std::vector<DuhamelResidual> duhamel_residual(const Trajectory& traj, DuhamelForm form,
                                              std::vector<double> checkpoints) {
  if (traj.blown_up) throw std::domain_error("duhamel_residual: trajectory blew up");
  if (!traj.config.dispersion_on)
    throw std::invalid_argument("duhamel_residual: requires the dispersive equation");
  if (!traj.config.kernel.is_constant())
    throw std::invalid_argument("duhamel_residual: requires a constant kernel");
  if (traj.frames.size() < 2)
    throw std::invalid_argument("duhamel_residual: need at least two stored frames");
  const int n = traj.config.grid.count;
  if (form == DuhamelForm::integrated_by_parts && n > 129)
    throw std::invalid_argument("duhamel_residual: grid too fine for the quartic path (N <= 129)");

  const double ds = traj.times[1] - traj.times[0];
  if (!(ds > 0.0 && ds <= 0.1 + 1e-12))
    throw std::invalid_argument("duhamel_residual: store spacing must be <= 0.1");
  for (size_t i = 1; i < traj.times.size(); ++i) {
    if (std::abs(traj.times[i] - traj.times[i - 1] - ds) > 1e-9)
      throw std::invalid_argument("duhamel_residual: stored frames must be uniformly spaced");
  }

  if (checkpoints.empty()) checkpoints.push_back(traj.times.back());

  const SymbolConfig& cfg = traj.config.cfg;
  const FrequencyGrid& grid = traj.config.grid;
  const Complex bc = traj.config.kernel.constant_value();
  const std::vector<SpectralField> vs = v_transform(traj);
  const SpectralField& u0 = traj.frames.front();
  const detail::PhasePairTable tab(cfg, grid);

  // 1/phi(k_j, q) for q on the doubled difference lattice (arguments y - z).
  std::vector<Complex> inv_phi_ext;
  if (form == DuhamelForm::integrated_by_parts) {
    inv_phi_ext.resize(static_cast<size_t>(n) * (2 * n - 1));
    for (int j = 0; j < n; ++j) {
      const double k = grid.node(j);
      for (int q = 0; q < 2 * n - 1; ++q) {
        const double x = (q - (n - 1)) * grid.spacing;
        inv_phi_ext[static_cast<size_t>(j) * (2 * n - 1) + q] = 1.0 / phi(cfg, k, x);
      }
    }
  }

  auto heat_factor = [&](double t) {
    std::vector<double> e(n);
    for (int j = 0; j < n; ++j) {
      const double k = grid.node(j);
      e[j] = std::exp(-cfg.d * k * k * t);
    }
    return e;
  };

  std::vector<DuhamelResidual> out;
  for (double tc : checkpoints) {
    int M = -1;
    for (size_t i = 0; i < traj.times.size(); ++i) {
      if (std::abs(traj.times[i] - tc) < 1e-9) {
        M = static_cast<int>(i);
        break;
      }
    }
    if (M < 0) throw std::invalid_argument("duhamel_residual: checkpoint is not a stored time");
    const double t = traj.times[M];

    SpectralField rec = zero_field(grid);
    const std::vector<double> heat_t = heat_factor(t);
    for (int j = 0; j < n; ++j) rec.values[j] = heat_t[j] * u0.values[j];

    if (form == DuhamelForm::original) {
      // rec += Bc * int_0^t e^{-d k^2 (t-s)} [twisted square of v(s)] ds
      for (int i = 0; i <= M; ++i) {
        const double s = traj.times[i];
        const double w = (i == 0 || i == M) ? 0.5 * ds : ds;
        if (M == 0) break;
        const std::vector<Complex> ph = phase_factor_table(tab, s);
        const SpectralField tc2 = twisted_square(ph, vs[i]);
        const std::vector<double> heat = heat_factor(t - s);
        for (int j = 0; j < n; ++j) rec.values[j] += w * bc * heat[j] * tc2.values[j];
      }
    } else {
      const Complex bc2 = bc * bc;
      const Complex bc3 = bc2 * bc;
      // boundary terms at s = 0 (initial data) and s = t
      const SpectralField q0 = weighted_square(tab, nullptr, u0);
      const SpectralField c0 = weighted_cube(tab, nullptr, u0);
      const std::vector<Complex> ph_t = phase_factor_table(tab, t);
      const SpectralField qt = weighted_square(tab, &ph_t, vs[M]);
      const SpectralField ct = weighted_cube(tab, &ph_t, vs[M]);
      for (int j = 0; j < n; ++j) {
        rec.values[j] += -bc * heat_t[j] * q0.values[j] + 2.0 * bc2 * heat_t[j] * c0.values[j] +
                         bc * qt.values[j] - 2.0 * bc2 * ct.values[j];
      }
      // quartic history integral
      const int cen = grid.center();
      for (int i = 0; i <= M; ++i) {
        const double s = traj.times[i];
        const double w = (i == 0 || i == M) ? 0.5 * ds : ds;
        if (M == 0) break;
        const std::vector<Complex> ph = phase_factor_table(tab, s);
        const SpectralField& v = vs[i];
        const SpectralField tw = twisted_square(ph, v);  // W(z) = dk sum_w e^{i phi_im(z,w) s} v v
        SpectralField quart = zero_field(grid);
        for (int j = 0; j < n; ++j) {
          Complex acc = 0.0;
          const int y_lo = std::max(0, j + cen - (n - 1));
          const int y_hi = std::min(n - 1, j + cen);
          for (int y = y_lo; y <= y_hi; ++y) {
            const Complex vy = v.values[j - y + cen];
            if (vy == Complex(0.0, 0.0)) continue;
            const size_t jy = static_cast<size_t>(j) * n + y;
            const Complex phase_jy = ph[jy];
            const Complex phi_jy(tab.phi_re[jy], tab.phi_im[jy]);
            const Complex two_inv_jy = 2.0 * Complex(tab.inv_re[jy], tab.inv_im[jy]);
            Complex inner = 0.0;
            const int z_lo = std::max(0, y + cen - (n - 1));
            const int z_hi = std::min(n - 1, y + cen);
            for (int z = z_lo; z <= z_hi; ++z) {
              const Complex vyz = v.values[y - z + cen];
              if (vyz == Complex(0.0, 0.0)) continue;
              const size_t yz = static_cast<size_t>(y) * n + z;
              const Complex psi = phi_jy + Complex(tab.phi_re[yz], tab.phi_im[yz]);
              // y - z on the doubled difference lattice for 1/phi(k, y-z)
              const Complex bracket =
                  two_inv_jy + inv_phi_ext[static_cast<size_t>(j) * (2 * n - 1) + (y - z + n - 1)];
              inner += ph[yz] * bracket / psi * vyz * tw.values[z];
            }
            acc += vy * phase_jy * inner;
          }
          quart.values[j] = grid.spacing * grid.spacing * acc;
        }
        const std::vector<double> heat = heat_factor(t - s);
        for (int j = 0; j < n; ++j) rec.values[j] += 2.0 * bc3 * w * heat[j] * quart.values[j];
      }
    }

    const double denom = norms(vs[M]).l2;
    const double resid = norms(rec - vs[M]).l2 / std::max(denom, 1e-300);
    out.push_back(DuhamelResidual{t, resid});
  }
  return out;
}

namespace {

void csv_number(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace

void write_norms_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,l1_hat,l2_hat,linf_hat,theta\n";
  double sup = 0.0;
  for (size_t i = 0; i < traj.norm_history.size(); ++i) {
    const double t = traj.step_time(static_cast<int>(i));
    const NormTriple& n = traj.norm_history[i];
    sup = std::max(sup, n.linf + std::sqrt(1.0 + t) * n.l1);
    std::string line;
    csv_number(line, t);
    line += ',';
    csv_number(line, n.l1);
    line += ',';
    csv_number(line, n.l2);
    line += ',';
    csv_number(line, n.linf);
    line += ',';
    csv_number(line, sup);
    line += '\n';
    os << line;
  }
}

void write_frame_csv(const SpectralField& f, std::ostream& os) {
  os << "k,re,im\n";
  for (int j = 0; j < f.size(); ++j) {
    std::string line;
    csv_number(line, f.grid.node(j));
    line += ',';
    csv_number(line, f.values[j].real());
    line += ',';
    csv_number(line, f.values[j].imag());
    line += '\n';
    os << line;
  }
}

}  // namespace vhkg
