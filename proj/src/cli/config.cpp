#include <json.hpp>

#include <cmath>
#include <set>

#include "cli_internal.hpp"
#include "spectralgas/kirchhoff.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/rmt.hpp"
#include "spectralgas/stieltjes.hpp"

namespace spectralgas::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"zeros",  "equilibrate", "evolve",  "quantize",
                                      "verify", "sample",      "compare", "action"};

const std::set<std::string> kTopKeys{"schema",     "command", "potential", "n",    "seed",
                                     "samples",    "tolerances", "output", "format", "plot",
                                     "flow",       "t_end"};

std::set<std::string> params_for(const std::string& kind) {
  if (kind == "laguerre") return {"alpha"};
  if (kind == "coulomb") return {"l"};
  if (kind == "jacobi") return {"alpha", "beta"};
  return {};
}

template <typename T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(field, "has the wrong type");
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "must be a number");
  return j.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config", "must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kTopKeys.contains(key)) throw ValidationError(key, "unknown key");
  }
  if (!doc.contains("schema")) throw ValidationError("schema", "missing (expected 1)");
  if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion) {
    throw ValidationError("schema", "unsupported version (expected 1)");
  }

  RunConfig c;
  if (doc.contains("command")) c.command = get_as<std::string>(doc["command"], "command");
  if (doc.contains("potential")) {
    const json& p = doc["potential"];
    if (!p.is_object()) throw ValidationError("potential", "must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key != "kind" && key != "params") throw ValidationError("potential." + key, "unknown key");
    }
    if (p.contains("kind")) c.potential.kind = get_as<std::string>(p["kind"], "potential.kind");
    if (p.contains("params")) {
      if (!p["params"].is_object()) throw ValidationError("potential.params", "must be an object");
      for (const auto& [key, value] : p["params"].items()) {
        c.potential.params[key] = get_number(value, "potential.params." + key);
      }
    }
  }
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw ValidationError("n", "must be an integer");
    const auto n = doc["n"].get<std::int64_t>();
    if (n < 0 || n > 1 << 20) throw ValidationError("n", "out of range");
    c.n = static_cast<int>(n);
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_unsigned()) throw ValidationError("seed", "must be an unsigned integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_unsigned()) throw ValidationError("samples", "must be an unsigned integer");
    c.samples = doc["samples"].get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object()) throw ValidationError("tolerances", "must be an object");
    for (const auto& [key, value] : doc["tolerances"].items()) {
      c.tolerances[key] = get_number(value, "tolerances." + key);
    }
  }
  if (doc.contains("output")) c.output = get_as<std::string>(doc["output"], "output");
  if (doc.contains("format")) c.format = get_as<std::string>(doc["format"], "format");
  if (doc.contains("plot")) {
    if (!doc["plot"].is_boolean()) throw ValidationError("plot", "must be a boolean");
    c.plot = doc["plot"].get<bool>();
  }
  if (doc.contains("flow")) c.flow = get_as<std::string>(doc["flow"], "flow");
  if (doc.contains("t_end")) c.t_end = get_number(doc["t_end"], "t_end");
  return c;
}

std::optional<std::string> primary_tolerance(const std::string& command) {
  if (command == "equilibrate" || command == "action") return "grad";
  if (command == "evolve") return "ode";
  if (command == "verify") return "residual";
  return std::nullopt;
}

std::set<std::string> tolerance_keys(const std::string& command) {
  if (command == "verify") return {"residual", "action"};
  if (const auto key = primary_tolerance(command)) return {*key};
  return {};
}

potentials::StatePrefactor build_prefactor(const PotentialSpec& spec) {
  auto param = [&](const std::string& key) {
    const auto it = spec.params.find(key);
    return it == spec.params.end() ? 0.0 : it->second;
  };
  try {
    if (spec.kind == "hermite") return potentials::make_prefactor(orthopoly::PolynomialFamily::hermite());
    if (spec.kind == "laguerre") {
      return potentials::make_prefactor(orthopoly::PolynomialFamily::laguerre(param("alpha")));
    }
    if (spec.kind == "coulomb") return potentials::coulomb(param("l"));
    if (spec.kind == "jacobi") {
      return potentials::make_prefactor(
          orthopoly::PolynomialFamily::jacobi(param("alpha"), param("beta")));
    }
  } catch (const ConfigurationError& e) {
    throw ValidationError("potential.params", e.what());
  }
  throw ValidationError("potential.kind",
                        "unknown family '" + spec.kind + "' (hermite, laguerre, coulomb, jacobi)");
}

void validate(const RunConfig& c) {
  if (c.command.empty()) throw ValidationError("command", "missing");
  if (!kCommands.contains(c.command)) {
    throw ValidationError("command", "unknown command '" + c.command + "'");
  }
  const std::set<std::string> allowed = params_for(c.potential.kind);
  if (c.potential.kind != "hermite" && allowed.empty()) {
    throw ValidationError("potential.kind", "unknown family '" + c.potential.kind + "'");
  }
  for (const auto& [key, value] : c.potential.params) {
    if (!allowed.contains(key)) {
      throw ValidationError("potential.params." + key,
                            "not a parameter of the " + c.potential.kind + " family");
    }
    if (!std::isfinite(value)) throw ValidationError("potential.params." + key, "must be finite");
  }
  (void)build_prefactor(c.potential);

  int lo = 1;
  int hi = stieltjes::kMaxCharges;
  if (c.command == "zeros") hi = orthopoly::kMaxDegree;
  if (c.command == "quantize") lo = 0;
  if (c.command == "verify") {
    lo = 0;
    hi = 20;
  }
  if (c.command == "sample") hi = rmt::kMaxDimension;
  if (c.command == "compare") hi = 20;
  if (c.n < lo || c.n > hi) {
    throw ValidationError("n", "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                   "] for " + c.command);
  }

  if (c.command == "sample" && (c.samples < 1 || c.samples > 100000000)) {
    throw ValidationError("samples", "must lie in [1, 1e8]");
  }
  if (c.command == "compare") {
    if (c.samples < 10000 || c.samples > 100000000) {
      throw ValidationError("samples", "must lie in [1e4, 1e8] for compare");
    }
    if (c.potential.kind != "hermite") {
      throw ValidationError("potential.kind", "compare needs the hermite family");
    }
  }

  const std::set<std::string> keys = tolerance_keys(c.command);
  for (const auto& [key, value] : c.tolerances) {
    if (!keys.contains(key)) {
      throw ValidationError("tolerances." + key, "not used by " + c.command);
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ValidationError("tolerances." + key, "must be positive and finite");
    }
  }
  if (const auto it = c.tolerances.find("ode");
      it != c.tolerances.end() && (it->second < 1e-12 || it->second > 1e-3)) {
    throw ValidationError("tolerances.ode", "must lie in [1e-12, 1e-3]");
  }

  if (c.output.empty()) throw ValidationError("output", "must not be empty");
  if (c.format != "csv" && c.format != "json") throw ValidationError("format", "must be csv or json");
  if (c.flow != "kirchhoff" && c.flow != "relaxation") {
    throw ValidationError("flow", "must be kirchhoff or relaxation");
  }
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end) || c.t_end > 1e4) {
    throw ValidationError("t_end", "must lie in (0, 1e4]");
  }
}

nlohmann::json config_to_json(const RunConfig& c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = c.command;
  j["potential"] = {{"kind", c.potential.kind}, {"params", c.potential.params}};
  j["n"] = c.n;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["samples"] = c.samples;
  j["tolerances"] = c.tolerances;
  j["output"] = c.output;
  j["format"] = c.format;
  j["plot"] = c.plot;
  j["flow"] = c.flow;
  j["t_end"] = c.t_end;
  return j;
}

}  // namespace spectralgas::cli
