#pragma once

// Helpers for driving the command-line tool from tests.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace testutil {

inline int run_tool(const std::string& args) {
  const std::string cmd = std::string(VHKG_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) throw std::runtime_error("failed to launch tool");
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline nlohmann::json read_json(const std::filesystem::path& p) {
  return nlohmann::json::parse(slurp(p));
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  os << j.dump(2) << "\n";
}

inline nlohmann::json base_config(double d, double K, int N, double dt, double t_end,
                                  int store_every, bool dispersion_on, double eta) {
  return nlohmann::json{
      {"cfg", {{"d", d}}},
      {"kernel", {{"variant", "constant"}, {"c", {{"re", 0.5 / M_PI}, {"im", 0.0}}}}},
      {"grid", {{"K", K}, {"N", N}}},
      {"dt", dt},
      {"t_end", t_end},
      {"store_every", store_every},
      {"dispersion_on", dispersion_on},
      {"blowup_factor", 1e3},
      {"eta", eta}};
}

}  // namespace testutil
