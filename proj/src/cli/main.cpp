#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cli_internal.hpp"

namespace spectralgas::cli {

int main(int argc, char** argv) {
  CLI::App app{"Log-gas, pole dynamics and random-matrix experiments", "spectralgas"};
  app.set_version_flag("--version", SPECTRALGAS_VERSION);

  std::string config_path;
  std::optional<std::string> command, family, out, format, flow;
  std::optional<int> n;
  std::optional<double> alpha, beta, l, tol, t_end;
  std::optional<std::uint64_t> seed, samples;
  bool plot = false;

  app.add_option("command_pos", command, "Command (same as --command)");
  app.add_option("--config", config_path, "JSON config file (schema 1)");
  app.add_option("--command", command,
                 "zeros | equilibrate | evolve | quantize | verify | sample | compare | action");
  app.add_option("--family", family, "hermite | laguerre | coulomb | jacobi");
  app.add_option("--n", n, "Number of charges, degree, state index or matrix dimension");
  app.add_option("--alpha", alpha, "Laguerre or Jacobi alpha");
  app.add_option("--beta", beta, "Jacobi beta");
  app.add_option("--l", l, "Coulomb orbital quantum number");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--tol", tol, "Primary tolerance of the command");
  app.add_option("--out", out, "Output path prefix");
  app.add_option("--format", format, "csv | json");
  app.add_option("--flow", flow, "evolve: kirchhoff | relaxation");
  app.add_option("--t-end", t_end, "evolve: final time");
  app.add_flag("--plot", plot, "Also write an SVG plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot read config " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      c = parse_config(text.str());
    }
    if (command) c.command = *command;
    if (family) {
      if (*family != c.potential.kind) c.potential.params.clear();
      c.potential.kind = *family;
    }
    if (n) c.n = *n;
    if (alpha) c.potential.params["alpha"] = *alpha;
    if (beta) c.potential.params["beta"] = *beta;
    if (l) c.potential.params["l"] = *l;
    if (seed) c.seed = *seed;
    if (samples) c.samples = *samples;
    if (tol) {
      const auto key = primary_tolerance(c.command);
      if (!key) throw ValidationError("tol", "command '" + c.command + "' takes no tolerance");
      c.tolerances[*key] = *tol;
    }
    if (out) c.output = *out;
    if (format) c.format = *format;
    if (flow) c.flow = *flow;
    if (t_end) c.t_end = *t_end;
    if (plot) c.plot = true;

    const RunResult r = run(c);
    for (const auto& p : r.outputs) std::cout << p.string() << '\n';
    std::cout << r.manifest.string() << '\n';
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace spectralgas::cli
