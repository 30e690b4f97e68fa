#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include "cli_internal.hpp"
#include "spectralgas/kirchhoff.hpp"
#include "spectralgas/orthopoly.hpp"
#include "spectralgas/qhj.hpp"
#include "spectralgas/rmt.hpp"
#include "spectralgas/stieltjes.hpp"

#ifndef SPECTRALGAS_VERSION
#define SPECTRALGAS_VERSION "0.0.0"
#endif

namespace spectralgas::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

// Data produced by one pipeline before it is written out.
struct Artifact {
  Table table;
  json report;  // body of the JSON data file
  json summary = json::object();
  std::optional<PlotKind> plot;
  Table plot_table;
  std::string plot_title;
  // Set when a verification bound failed; raised after the files are written.
  std::optional<std::string> failure;
};

double tolerance(const RunConfig& c, const std::string& key, double fallback) {
  const auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : it->second;
}

std::vector<double> column(const Table& t, std::size_t k) {
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(r[k]);
  return out;
}

Table positions_table(const std::string& name, std::span<const double> x) {
  Table t{{"index", name}, {}};
  for (std::size_t i = 0; i < x.size(); ++i) t.rows.push_back({static_cast<double>(i), x[i]});
  return t;
}

Table scatter_on_axis(std::span<const double> x) {
  Table t{{"x", "y"}, {}};
  for (double v : x) t.rows.push_back({v, 0.0});
  return t;
}

Artifact run_zeros(const RunConfig& c, const potentials::StatePrefactor& pref) {
  const ChargeConfiguration z = orthopoly::zeros(pref.family(), c.n);
  Artifact a;
  a.table = positions_table("zero", z.positions());
  a.report = {{"family", pref.family().name()}, {"degree", c.n}, {"zeros", z.values()}};
  a.summary = {{"min_gap", c.n > 1 ? json(z.min_gap()) : json(nullptr)}};
  a.plot = PlotKind::scatter;
  a.plot_table = scatter_on_axis(z.positions());
  a.plot_title = fmt::format("zeros of {} degree {}", pref.family().name(), c.n);
  return a;
}

Artifact run_equilibrate(const RunConfig& c, const potentials::StatePrefactor& pref) {
  stieltjes::EquilibrateOptions opts;
  opts.grad_tol = tolerance(c, "grad", opts.grad_tol);
  const ChargeConfiguration x = stieltjes::equilibrate(pref, c.n, std::nullopt, opts);
  const ChargeConfiguration z = orthopoly::zeros(pref.family(), c.n);
  double dev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dev = std::max(dev, std::abs(x[i] - z[i]));
  const stieltjes::EnergyReport e = stieltjes::energy(x, pref);
  Artifact a;
  a.table = positions_table("position", x.positions());
  a.report = {{"family", pref.family().name()}, {"n", c.n},           {"positions", x.values()},
              {"energy", e.energy},             {"grad_norm", e.grad_norm},
              {"max_zero_deviation", dev}};
  a.summary = {{"energy", e.energy}, {"grad_norm", e.grad_norm}, {"max_zero_deviation", dev}};
  a.plot = PlotKind::scatter;
  a.plot_table = scatter_on_axis(x.positions());
  a.plot_title = fmt::format("equilibrium of {} charges, {}", c.n, pref.family().name());
  return a;
}

Artifact run_evolve(const RunConfig& c, const potentials::StatePrefactor& pref) {
  const ChargeConfiguration eq = stieltjes::equilibrate(pref, c.n);
  const double scale = 0.05 * (c.n > 1 ? eq.min_gap() : 1.0);
  std::mt19937_64 rng = rmt::make_stream(c.seed.value_or(0), 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  kirchhoff::PoleState state;
  const bool relaxation = c.flow == "relaxation";
  for (double x : eq.positions()) {
    const double re = x + scale * u(rng);
    const double im = relaxation ? 0.0 : scale * u(rng);
    state.poles.emplace_back(re, im);
  }
  kirchhoff::FlowOptions opts;
  opts.pref = pref;
  opts.flow = relaxation ? kirchhoff::Flow::relaxation : kirchhoff::Flow::kirchhoff;
  const kirchhoff::Trajectory traj =
      kirchhoff::integrate(state, opts, c.t_end, tolerance(c, "ode", 1e-9));

  Artifact a;
  a.table.columns = {"t"};
  for (int k = 1; k <= c.n; ++k) {
    a.table.columns.push_back(fmt::format("re(x_{})", k));
    a.table.columns.push_back(fmt::format("im(x_{})", k));
  }
  json samples = json::array();
  for (const kirchhoff::TrajectorySample& s : traj.samples) {
    std::vector<double> row{s.time};
    json poles = json::array();
    for (const auto& z : s.poles) {
      row.push_back(z.real());
      row.push_back(z.imag());
      poles.push_back({z.real(), z.imag()});
    }
    a.table.rows.push_back(std::move(row));
    samples.push_back({{"t", s.time}, {"poles", poles}});
  }
  a.report = {{"flow", c.flow}, {"n", c.n}, {"t_end", c.t_end}, {"samples", samples},
              {"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}};
  a.summary = {{"accepted", traj.stats.accepted},
               {"rejected", traj.stats.rejected},
               {"min_step", traj.stats.min_step}};
  a.plot = PlotKind::trajectory;
  a.plot_table = a.table;
  a.plot_title = fmt::format("{} flow, {} poles", c.flow, c.n);
  return a;
}

Artifact run_quantize(const RunConfig& c, const potentials::StatePrefactor& pref) {
  const qhj::Quantization q = qhj::quantize(pref, c.n);
  Artifact a;
  a.table = positions_table("node", q.nodes.positions());
  a.report = {{"family", pref.family().name()},
              {"n", c.n},
              {"energy", q.energy},
              {"spread", q.spread},
              {"nodes", q.nodes.values()},
              {"certificate_points", q.certificate_points}};
  a.summary = {{"energy", q.energy}, {"spread", q.spread}};
  a.plot = PlotKind::scatter;
  a.plot_table = scatter_on_axis(q.nodes.positions());
  a.plot_title = fmt::format("nodes of state {}, E = {:.12g}", c.n, q.energy);
  return a;
}

std::vector<double> verify_grid(const potentials::StatePrefactor& pref,
                                std::span<const double> nodes) {
  Interval range = pref.support();
  if (std::isinf(range.lo)) range.lo = -6.0;
  if (std::isinf(range.hi)) range.hi = std::max(6.0, nodes.empty() ? 0.0 : nodes.back() + 6.0);
  const int m = 1200;
  std::vector<double> grid;
  for (int i = 1; i < m; ++i) {
    const double x = range.lo + (range.hi - range.lo) * i / m;
    bool near = false;
    for (double xk : nodes) near = near || std::abs(x - xk) < qhj::kNodeGuard;
    if (!near) grid.push_back(x);
  }
  return grid;
}

Artifact run_verify(const RunConfig& c, const potentials::StatePrefactor& pref) {
  const double tol = tolerance(c, "residual", 1e-8);
  const double action_tol = tolerance(c, "action", 1e-6);
  const qhj::Quantization q = qhj::quantize(pref, c.n);
  const auto nodes = q.nodes.positions();
  const std::vector<double> grid = verify_grid(pref, nodes);
  const potentials::Potential v = potentials::schrodinger_potential(pref);
  const qhj::WaveFunction psi = qhj::wavefunction(pref, q.nodes);
  const qhj::QuantumMomentumFunction p = qhj::qmf_from_state(pref, q.nodes);

  const qhj::GridFunction rs = qhj::schrodinger_residual(psi, v, q.energy, grid);
  const qhj::GridFunction rr = qhj::riccati_residual(p, v, q.energy, grid);
  const qhj::GridFunction rb = qhj::burgers_residual(p, v, grid);

  double radius = 1.0;
  for (double x : nodes) radius = std::max(radius, std::abs(x) + 1.0);
  std::optional<double> action;
  if (pref.fixed_poles().empty()) {
    action = qhj::contour_action(p, qhj::Circle{0.0, radius, 256});
  }

  Artifact a;
  a.table.columns = {"x", "schrodinger", "riccati_abs", "burgers_abs"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a.table.rows.push_back(
        {grid[i], rs.value[i].real(), std::abs(rr.value[i]), std::abs(rb.value[i])});
  }
  const double ms = rs.max_abs();
  const double mr = rr.max_abs();
  const double mb = rb.max_abs();
  json checks = {
      {"schrodinger", {{"max_abs", ms}, {"tolerance", tol}, {"pass", ms <= tol}}},
      {"riccati", {{"max_abs", mr}, {"tolerance", tol}, {"pass", mr <= tol}}},
      {"burgers", {{"max_abs", mb}, {"tolerance", tol}, {"pass", mb <= tol}}},
  };
  bool ok = ms <= tol && mr <= tol && mb <= tol;
  if (action) {
    const double dev = std::abs(*action - c.n * pref.hbar());
    checks["contour_action"] = {{"value", *action},
                                {"expected", c.n * pref.hbar()},
                                {"tolerance", action_tol},
                                {"pass", dev <= action_tol}};
    ok = ok && dev <= action_tol;
  }
  a.report = {{"family", pref.family().name()},
              {"n", c.n},
              {"energy", q.energy},
              {"grid_points", grid.size()},
              {"node_guard", qhj::kNodeGuard},
              {"checks", checks},
              {"pass", ok}};
  a.summary = {{"energy", q.energy}, {"schrodinger", ms}, {"riccati", mr}, {"burgers", mb}, {"pass", ok}};
  if (!ok) a.failure = fmt::format("verify: residuals exceed tolerance {} (schrodinger {:.3g}, "
                                   "riccati {:.3g}, burgers {:.3g})", tol, ms, mr, mb);
  a.plot = PlotKind::scatter;
  a.plot_table = Table{{"x", "|riccati residual|"}, {}};
  for (const auto& r : a.table.rows) a.plot_table.rows.push_back({r[0], r[2]});
  a.plot_title = fmt::format("Riccati residual, state {}", c.n);
  return a;
}

Artifact run_sample(const RunConfig& c) {
  const std::uint64_t seed = c.seed.value_or(0);
  const std::vector<double> ev = rmt::sample_gue_eigenvalues(c.n, seed, c.samples);
  Artifact a;
  a.table.columns = {"seed", "sample", "index", "eigenvalue"};
  json samples = json::array();
  for (std::uint64_t s = 0; s < c.samples; ++s) {
    std::vector<double> one(ev.begin() + static_cast<std::ptrdiff_t>(s * c.n),
                            ev.begin() + static_cast<std::ptrdiff_t>((s + 1) * c.n));
    for (int i = 0; i < c.n; ++i) {
      a.table.rows.push_back({static_cast<double>(seed), static_cast<double>(s),
                              static_cast<double>(i), one[static_cast<std::size_t>(i)]});
    }
    samples.push_back(std::move(one));
  }
  a.report = {{"seed", seed}, {"dim", c.n}, {"beta", 2}, {"eigenvalues", samples}};
  double mean = 0.0;
  for (double x : ev) mean += x;
  mean /= static_cast<double>(ev.size());
  a.summary = {{"eigenvalue_mean", mean}, {"count", ev.size()}};

  const auto [mn, mx] = std::minmax_element(ev.begin(), ev.end());
  const double lo = *mn;
  const double hi = *mx > *mn ? *mx : *mn + 1.0;
  const int bins = 60;
  const double w = (hi - lo) / bins;
  std::vector<double> counts(bins, 0.0);
  for (double x : ev) counts[std::min(bins - 1, static_cast<int>((x - lo) / w))] += 1.0;
  a.plot_table.columns = {"eigenvalue", "density"};
  for (int b = 0; b < bins; ++b) {
    a.plot_table.rows.push_back({lo + (b + 0.5) * w, counts[b] / (static_cast<double>(ev.size()) * w)});
  }
  a.plot = PlotKind::histogram;
  a.plot_title = fmt::format("GUE eigenvalues, dim {}, {} samples", c.n, c.samples);
  return a;
}

Artifact run_compare(const RunConfig& c, const potentials::StatePrefactor& pref) {
  const rmt::BinSpec bins;
  const rmt::DensityComparison d =
      rmt::compare_to_quantum(pref, c.n, c.samples, c.seed.value_or(0), bins);
  Artifact a;
  a.table.columns = {"bin_center", "empirical", "theoretical"};
  for (const rmt::DensityBin& b : d.bins) a.table.rows.push_back({b.center, b.empirical, b.theoretical});
  a.report = {{"n_states", c.n},
              {"samples", d.sample_count},
              {"ks_statistic", d.ks_statistic},
              {"included_mass", d.included_mass},
              {"bins", {{"lo", bins.lo}, {"hi", bins.hi}, {"count", bins.count}}},
              {"bin_center", column(a.table, 0)},
              {"empirical", column(a.table, 1)},
              {"theoretical", column(a.table, 2)}};
  a.summary = {{"ks_statistic", d.ks_statistic}, {"included_mass", d.included_mass}};
  const double width = (bins.hi - bins.lo) / bins.count;
  a.plot_table.columns = {"x", "empirical density", "quantum density"};
  for (const rmt::DensityBin& b : d.bins) {
    a.plot_table.rows.push_back({b.center, b.empirical / width, b.theoretical / width});
  }
  a.plot = PlotKind::histogram;
  a.plot_title = fmt::format("GUE dim {} vs quantum density, KS {:.4f}", c.n, d.ks_statistic);
  return a;
}

Artifact run_action(const RunConfig& c, const potentials::StatePrefactor& pref) {
  stieltjes::EquilibrateOptions opts;
  opts.grad_tol = tolerance(c, "grad", opts.grad_tol);
  const ChargeConfiguration x = stieltjes::equilibrate(pref, c.n, std::nullopt, opts);
  const stieltjes::ActionValue s = stieltjes::quantum_action(x, pref);
  const std::vector<double> grad = stieltjes::action_gradient(x, pref);
  Artifact a;
  a.table.columns = {"index", "position", "action_gradient"};
  for (std::size_t i = 0; i < x.size(); ++i) {
    a.table.rows.push_back({static_cast<double>(i), x[i], grad[i]});
  }
  a.report = {{"family", pref.family().name()},
              {"n", c.n},
              {"positions", x.values()},
              {"real_part", s.real_part},
              {"imag_part", s.imag_part},
              {"pair_term", s.pair_term},
              {"potential_term", s.potential_term},
              {"gradient", grad}};
  a.summary = {{"imag_part", s.imag_part}};
  a.plot = PlotKind::scatter;
  a.plot_table = Table{{"position", "d(S/i)/dx"}, {}};
  for (const auto& r : a.table.rows) a.plot_table.rows.push_back({r[1], r[2]});
  a.plot_title = fmt::format("action gradient at the equilibrium, n = {}", c.n);
  return a;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    s += (i ? "," : "") + t.columns[i];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += fmt::format("{:.17g}", row[i]);
    }
    s += '\n';
  }
  return s;
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

}  // namespace

RunResult run(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const potentials::StatePrefactor pref = build_prefactor(config.potential);

  Artifact a;
  const std::string& cmd = config.command;
  if (cmd == "zeros") a = run_zeros(config, pref);
  else if (cmd == "equilibrate") a = run_equilibrate(config, pref);
  else if (cmd == "evolve") a = run_evolve(config, pref);
  else if (cmd == "quantize") a = run_quantize(config, pref);
  else if (cmd == "verify") a = run_verify(config, pref);
  else if (cmd == "sample") a = run_sample(config);
  else if (cmd == "compare") a = run_compare(config, pref);
  else a = run_action(config, pref);

  const fs::path base(config.output);
  if (base.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(base.parent_path(), ec);
    if (ec) throw IoError("cannot create " + base.parent_path().string() + ": " + ec.message());
  }

  RunResult result;
  const std::string stem = config.output + "." + cmd;
  const fs::path data = with_suffix(stem, "." + config.format);
  write_text(data, config.format == "csv" ? to_csv(a.table) : a.report.dump(2) + "\n");
  result.outputs.push_back(data);
  if (config.plot && a.plot && !a.plot_table.rows.empty()) {
    const fs::path svg = with_suffix(stem, ".svg");
    emit_plot(a.plot_table, *a.plot, svg, a.plot_title);
    result.outputs.push_back(svg);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json outputs = json::array();
  for (const fs::path& p : result.outputs) {
    outputs.push_back({{"path", p.filename().string()},
                       {"bytes", fs::file_size(p)},
                       {"sha256", sha256_hex(p)}});
  }
  const json manifest = {{"schema", kSchemaVersion},
                         {"tool", "spectralgas"},
                         {"version", SPECTRALGAS_VERSION},
                         {"command", cmd},
                         {"inputs", config_to_json(config)},
                         {"seed", config.seed.value_or(0)},
                         {"threads", rmt::max_threads()},
                         {"wall_time_s", wall},
                         {"outputs", outputs},
                         {"summary", a.summary}};
  result.manifest = with_suffix(stem, ".manifest.json");
  write_text(result.manifest, manifest.dump(2) + "\n");

  if (a.failure) throw NumericError(*a.failure);
  return result;
}

}  // namespace spectralgas::cli
