#include "vhkg/reports.hpp"

#include <cstdint>

namespace vhkg {

namespace {

const char* operator_name(OperatorId op) {
  switch (op) {
    case OperatorId::B: return "B";
    case OperatorId::A2: return "A2";
    case OperatorId::A3: return "A3";
    default: return "Q";
  }
}

const char* exponent_name(LebesgueExponent p) {
  switch (p) {
    case LebesgueExponent::p1: return "1";
    case LebesgueExponent::p2: return "2";
    default: return "inf";
  }
}

nlohmann::json complex_to_json(Complex c) {
  return nlohmann::json{{"re", c.real()}, {"im", c.imag()}};
}

}  // namespace

std::string norm_id_name(NormId id) {
  switch (id) {
    case NormId::l1_hat: return "l1_hat";
    case NormId::l2_hat: return "l2_hat";
    case NormId::linf_hat: return "linf_hat";
    case NormId::l2_x: return "l2_x";
    default: return "linf_x";
  }
}

nlohmann::json to_json(const PhaseCertificate& cert) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"d", cert.d},
                        {"delta", cert.delta},
                        {"phi0_analytic", cert.phi0_analytic},
                        {"psi0_analytic", cert.psi0_analytic},
                        {"phi_grid_min", cert.phi_grid_min},
                        {"psi_grid_min", cert.psi_grid_min},
                        {"phi_box_half_width", cert.phi_box_half_width},
                        {"phi_resolution", cert.phi_resolution},
                        {"psi_box_half_width", cert.psi_box_half_width},
                        {"psi_resolution", cert.psi_resolution},
                        {"phi_scan_slack", cert.phi_scan_slack},
                        {"psi_scan_slack", cert.psi_scan_slack},
                        {"phi_im_max", cert.phi_im_max}};
}

nlohmann::json to_json(const MultilinearEstimateReport& rep) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"operator", operator_name(rep.op)},
                        {"p", exponent_name(rep.p)},
                        {"empirical_constant", rep.empirical_constant},
                        {"ensemble_size", rep.ensemble_size},
                        {"seed", rep.seed}};
}

nlohmann::json to_json(const NormalFormResidualReport& rep) {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"times", rep.times},
                   {"residual_l2", rep.residual_l2},
                   {"dt_used", rep.dt_used}};
  if (rep.convergence_order)
    j["convergence_order"] = *rep.convergence_order;
  else
    j["convergence_order"] = nullptr;
  return j;
}

nlohmann::json to_json(const DecayReport& rep) {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"norm_id", norm_id_name(rep.norm_id)},
                        {"fitted_exponent", rep.fitted_exponent},
                        {"fit_window", {rep.window_lo, rep.window_hi}},
                        {"r_squared", rep.r_squared},
                        {"theta_sup", rep.theta_sup},
                        {"e0", rep.e0}};
}

namespace {

nlohmann::json kernel_to_json(const KernelSpec& k) {
  if (k.is_constant())
    return nlohmann::json{{"variant", "constant"}, {"c", complex_to_json(k.constant_value())}};
  // Tabulated kernels round-trip through configs only when constructed there;
  // exporting the full table is intentional.
  throw std::invalid_argument("kernel_to_json: only constant kernels serialize from RunConfig");
}

Complex complex_from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_object() && j.contains("re"))
    return Complex(j.at("re").get<double>(), j.value("im", 0.0));
  throw ConfigError("config field '" + field + "' must be a number or {re, im}");
}

}  // namespace

nlohmann::json to_json(const RunConfig& run) {
  return nlohmann::json{{"cfg", {{"d", run.cfg.d}}},
                        {"kernel", kernel_to_json(run.kernel)},
                        {"grid", {{"K", run.grid.cutoff}, {"N", run.grid.count}}},
                        {"dt", run.dt},
                        {"t_end", run.t_end},
                        {"store_every", run.store_every},
                        {"dispersion_on", run.dispersion_on},
                        {"blowup_factor", run.blowup_factor},
                        {"eta", run.eta}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field)) throw ConfigError(std::string("missing config field '") + field + "'");
    return j.at(field);
  };
  RunConfig run;
  {
    const nlohmann::json& cfg = require("cfg");
    if (!cfg.is_object() || !cfg.contains("d") || !cfg.at("d").is_number())
      throw ConfigError("config field 'cfg.d' must be a number");
    run.cfg.d = cfg.at("d").get<double>();
    if (!(run.cfg.d > 0.0)) throw ConfigError("config field 'cfg.d' must be positive");
  }
  {
    const nlohmann::json& k = require("kernel");
    const std::string variant = k.value("variant", "");
    if (variant == "constant") {
      run.kernel = KernelSpec::constant(complex_from_json(k.at("c"), "kernel.c"));
    } else if (variant == "tabulated") {
      for (const char* f : {"box_half_width", "n", "sup_bound", "values"})
        if (!k.contains(f)) throw ConfigError(std::string("missing config field 'kernel.") + f + "'");
      const int n = k.at("n").get<int>();
      std::vector<Complex> vals;
      for (const auto& v : k.at("values")) vals.push_back(complex_from_json(v, "kernel.values"));
      try {
        run.kernel = KernelSpec::tabulated(k.at("box_half_width").get<double>(), n, std::move(vals),
                                           k.at("sup_bound").get<double>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config field 'kernel': ") + e.what());
      }
    } else {
      throw ConfigError("config field 'kernel.variant' must be 'constant' or 'tabulated'");
    }
  }
  {
    const nlohmann::json& g = require("grid");
    if (!g.contains("K") || !g.contains("N")) throw ConfigError("config field 'grid' needs K and N");
    try {
      run.grid = make_grid(g.at("K").get<double>(), g.at("N").get<int>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config field 'grid': ") + e.what());
    }
  }
  auto number = [&](const char* field) {
    const nlohmann::json& v = require(field);
    if (!v.is_number()) throw ConfigError(std::string("config field '") + field + "' must be a number");
    return v.get<double>();
  };
  run.dt = number("dt");
  if (!(run.dt > 0.0)) throw ConfigError("config field 'dt' must be positive");
  run.t_end = number("t_end");
  if (!(run.t_end >= run.dt)) throw ConfigError("config field 't_end' must be >= dt");
  run.store_every = static_cast<int>(number("store_every"));
  if (run.store_every < 1) throw ConfigError("config field 'store_every' must be >= 1");
  {
    const nlohmann::json& v = require("dispersion_on");
    if (!v.is_boolean()) throw ConfigError("config field 'dispersion_on' must be a boolean");
    run.dispersion_on = v.get<bool>();
  }
  run.blowup_factor = j.value("blowup_factor", 1e3);
  if (!(run.blowup_factor > 0.0)) throw ConfigError("config field 'blowup_factor' must be positive");
  run.eta = number("eta");
  if (!std::isfinite(run.eta)) throw ConfigError("config field 'eta' must be finite");
  return run;
}

std::string config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace vhkg
