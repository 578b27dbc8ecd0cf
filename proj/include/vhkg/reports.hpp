#pragma once

// JSON serialization of reports and the run-configuration document consumed
// by the command-line tool. All reports carry schema_version "1".

#include <string>

#include <json.hpp>

#include "vhkg/evolution.hpp"
#include "vhkg/normal_form.hpp"
#include "vhkg/symbols.hpp"

namespace vhkg {

inline constexpr const char* kSchemaVersion = "1";

// Thrown by run_config_from_json; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const PhaseCertificate& cert);
nlohmann::json to_json(const MultilinearEstimateReport& rep);
nlohmann::json to_json(const NormalFormResidualReport& rep);
nlohmann::json to_json(const DecayReport& rep);

nlohmann::json to_json(const RunConfig& run);
RunConfig run_config_from_json(const nlohmann::json& j);

std::string norm_id_name(NormId id);

// FNV-1a 64-bit hash of the canonical (sorted-key) dump of a JSON document.
std::string config_hash(const nlohmann::json& j);

}  // namespace vhkg
