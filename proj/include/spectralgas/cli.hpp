#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectralgas/errors.hpp"

// Command-line front end. A run reads an optional JSON config, applies flag
// overrides, validates, executes one pipeline and writes data files, an
// optional SVG and a manifest under the output prefix.
namespace spectralgas::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

inline constexpr int kSchemaVersion = 1;

struct PotentialSpec {
  std::string kind = "hermite";  // hermite | laguerre | coulomb | jacobi
  std::map<std::string, double> params;
};

struct RunConfig {
  std::string command;
  PotentialSpec potential;
  int n = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 10000;
  std::map<std::string, double> tolerances;
  std::string output = "spectralgas";
  std::string format = "csv";  // csv | json
  bool plot = false;
  std::string flow = "kirchhoff";  // evolve only: kirchhoff | relaxation
  double t_end = 1.0;              // evolve only
};

// Raised for an invalid config; field() names the offending key.
class ValidationError : public ConfigurationError {
 public:
  ValidationError(std::string field, const std::string& message)
      : ConfigurationError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Parses a schema-1 JSON document. Unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);

// Checks ranges and cross-field constraints.
void validate(const RunConfig& config);

struct RunResult {
  std::vector<std::filesystem::path> outputs;  // data files and plots
  std::filesystem::path manifest;
};

// Validates and executes. Throws ValidationError, IoError or the module error.
RunResult run(const RunConfig& config);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

enum class PlotKind { scatter, histogram, trajectory };

// Deterministic self-contained SVG.
//   scatter:    column 0 against column 1 (or against zero with one column)
//   histogram:  bars of column 1 at centers column 0; column 2, if present,
//               drawn as an overlay curve
//   trajectory: columns t, re_1, im_1, re_2, im_2, ... as paths in the plane
void emit_plot(const Table& data, PlotKind kind, const std::filesystem::path& path,
               const std::string& title = {});

// Full command-line entry: parses flags, runs, prints errors, returns the exit code.
int main(int argc, char** argv);

}  // namespace spectralgas::cli
