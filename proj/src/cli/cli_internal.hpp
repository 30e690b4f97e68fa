#pragma once

#include <json.hpp>

#include <optional>
#include <set>
#include <string>

#include "spectralgas/cli.hpp"
#include "spectralgas/potentials.hpp"

namespace spectralgas::cli {

potentials::StatePrefactor build_prefactor(const PotentialSpec& spec);

// Tolerance key that --tol sets for a command, if any.
std::optional<std::string> primary_tolerance(const std::string& command);
std::set<std::string> tolerance_keys(const std::string& command);

nlohmann::json config_to_json(const RunConfig& config);

std::string sha256_hex(const std::filesystem::path& path);

}  // namespace spectralgas::cli
