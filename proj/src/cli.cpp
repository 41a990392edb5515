#include "lindcorr/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lindcorr/correlation.hpp"
#include "lindcorr/error.hpp"
#include "lindcorr/model_io.hpp"
#include "lindcorr/models.hpp"
#include "lindcorr/spectral.hpp"
#include "lindcorr/steady_state.hpp"

namespace lindcorr {

namespace {

struct Artifact {
  Json result;
  Table table;
  Json residuals = Json::object();
};

CouplingStencil load_stencil(const RunConfig& c) {
  if (!c.model_path.empty() && !c.preset.empty())
    throw Error(ErrorKind::InvalidArgument, "use either --model or --preset");
  if (!c.model_path.empty()) return load_model(c.model_path);
  if (!c.preset.empty()) return build_preset(c.preset, c.params);
  throw Error(ErrorKind::InvalidArgument, "a model is required (--model or --preset)");
}

std::vector<int> grid_or(const RunConfig& c, int dims, int fallback) {
  if (!c.grid.empty()) {
    if (c.grid.size() == 1 && dims > 1) return std::vector<int>(static_cast<std::size_t>(dims), c.grid[0]);
    if (static_cast<int>(c.grid.size()) != dims)
      throw Error(ErrorKind::InvalidArgument, "--grid needs one size or one per dimension");
    return c.grid;
  }
  return std::vector<int>(static_cast<std::size_t>(dims), fallback);
}

int default_momentum_grid(int dims) { return dims == 1 ? 1024 : (dims == 2 ? 128 : 32); }

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---- steady -------------------------------------------------------------

Artifact cmd_steady(const RunConfig& c) {
  const CouplingStencil st = load_stencil(c);
  const int D = st.lattice.dims;
  std::string method = c.method;
  if (method == "auto")
    method = st.quasifree() && (!st.lattice.is_finite() || (!c.grid.empty())) ? "momentum" : "dense";
  CovarianceField field;
  if (method == "momentum") {
    std::vector<int> grid = st.lattice.is_finite() && c.grid.empty() ? st.lattice.extent
                                                                     : grid_or(c, D, default_momentum_grid(D));
    field = solve_steady_momentum(st, grid);
  } else if (method == "dense") {
    LatticeSpec lat = st.lattice;
    if (!c.grid.empty()) lat = LatticeSpec::finite(grid_or(c, D, 1), st.lattice.bands);
    if (!lat.is_finite()) throw Error(ErrorKind::InvalidArgument, "dense solve needs a finite extent or --grid");
    DenseSolveOptions opts;
    opts.residual_factor = c.tol;
    field = solve_steady_dense(build_dense(st, lat), opts);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + c.method + "'");
  }
  Artifact a;
  a.result = to_json(field);
  a.table = field_table(field);
  a.residuals = {{"method", field.method},
                 {"residual", field.residual},
                 {"residual_tolerance", field.residual_tolerance},
                 {"translation_spread", field.translation_spread},
                 {"imag_residue", field.imag_residue}};
  return a;
}

// ---- gap ----------------------------------------------------------------

GapPoint gap_of(const CouplingStencil& st, const RunConfig& c) {
  const int D = st.lattice.dims;
  return dissipative_gap(st, grid_or(c, D, st.quasifree() ? default_momentum_grid(D) : 8));
}

Artifact cmd_gap(const RunConfig& c) {
  GapCurve curve;
  if (c.sweep.empty()) {
    curve.points.push_back(gap_of(load_stencil(c), c));
  } else {
    if (c.preset.empty()) throw Error(ErrorKind::InvalidArgument, "--sweep needs --preset");
    const auto eq = c.sweep.find('=');
    const auto c1 = c.sweep.find(':', eq == std::string::npos ? 0 : eq);
    const auto c2 = c1 == std::string::npos ? std::string::npos : c.sweep.find(':', c1 + 1);
    if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
      throw Error(ErrorKind::ParseError, "--sweep expects key=start:stop:count");
    const std::string key = c.sweep.substr(0, eq);
    const double a = parse_value(c.sweep.substr(eq + 1, c1 - eq - 1));
    const double b = parse_value(c.sweep.substr(c1 + 1, c2 - c1 - 1));
    const int n = static_cast<int>(parse_value(c.sweep.substr(c2 + 1)));
    if (n < 1) throw Error(ErrorKind::ParseError, "sweep count must be >= 1");
    curve.parameter_name = key;
    for (int i = 0; i < n; ++i) {
      const double v = n == 1 ? a : a + (b - a) * i / (n - 1);
      auto params = c.params;
      params[key] = number_text(v);
      GapPoint gp = gap_of(build_preset(c.preset, params), c);
      gp.parameter = v;
      curve.points.push_back(gp);
    }
  }
  Artifact a;
  a.result = to_json(curve);
  a.table = gap_table(curve);
  return a;
}

// ---- gap-path -----------------------------------------------------------

Artifact cmd_gap_path(const RunConfig& c) {
  PathSpec path;
  path.start = load_stencil(c);
  if (!c.to_model_path.empty()) {
    path.end = load_model(c.to_model_path);
  } else if (!c.preset.empty()) {
    auto end_params = c.params;
    for (const auto& [k, v] : c.to_params) end_params[k] = v;
    path.end = build_preset(c.preset, end_params);
    // same preset at both ends: interpolate the numeric parameters
    std::map<std::string, std::pair<double, double>> numeric;
    for (const auto& [k, v] : end_params) {
      if (k == "extent") continue;
      auto it = c.params.find(k);
      const double from = it == c.params.end() ? parse_value(v) : parse_value(it->second);
      numeric[k] = {from, parse_value(v)};
    }
    const std::string preset = c.preset;
    auto fixed = c.params;
    path.family = [preset, fixed, numeric](double g) {
      auto p = fixed;
      for (const auto& [k, ab] : numeric) p[k] = number_text((1.0 - g) * ab.first + g * ab.second);
      return build_preset(preset, p);
    };
  } else {
    throw Error(ErrorKind::InvalidArgument, "gap-path needs --to-model or --preset with --to-param");
  }
  if (c.kappa < 0) throw Error(ErrorKind::NegativeRate, "kappa must be >= 0");
  path.schedule = {{0.0, 0.0}, {0.0, c.kappa}, {1.0, c.kappa}, {1.0, 0.0}};
  const int D = path.start.lattice.dims;
  const GapCurve curve = gap_along_path(path, static_cast<std::size_t>(std::max(2, c.samples)),
                                        grid_or(c, D, path.start.quasifree() ? default_momentum_grid(D) : 8));
  Artifact a;
  a.result = to_json(curve);
  a.result["schedule"] = Json::array();
  for (const auto& w : path.schedule) a.result["schedule"].push_back({{"g", w.g}, {"kappa", w.kappa}});
  a.table = gap_table(curve);
  return a;
}

// ---- decay --------------------------------------------------------------

Artifact cmd_decay(const RunConfig& c) {
  const CouplingStencil st = load_stencil(c);
  const int D = st.lattice.dims;
  DecayReport rep;
  Json notes = Json::array();
  if (D == 1) {
    const DifferenceStencil ds = build_difference_stencil(st);
    rep.modes = decay_modes(ds, &rep.route);
    double bmax = 0.0;
    for (const cd b : rep.modes.modes) bmax = std::max(bmax, std::abs(b));
    rep.xi_bound = {bmax > 0 && bmax < 1 ? -1.0 / std::log(bmax) : (bmax >= 1 ? INFINITY : 0.0)};

    int N = st.lattice.is_finite() ? st.lattice.extent[0] : 200;
    if (!c.grid.empty()) N = c.grid[0];
    const CovarianceField field = solve_steady_dense(build_dense(st, LatticeSpec::finite({N}, st.lattice.bands)));
    const int burn = 2 * ds.d + 2;
    const int rlo = std::max(burn, ds.inhomogeneous_range - ds.d + 1);
    const int rhi = N / 2 - ds.R();
    if (rhi >= rlo) rep.difference_residual = difference_residual(ds, field, rlo, rhi);
    const RMatrix g0 = field.gamma({burn}).cwiseAbs();
    Eigen::Index p = 0, q = 0;
    g0.maxCoeff(&p, &q);
    std::vector<double> rs, vs;
    for (int r = burn; r <= N / 2; ++r) {
      rs.push_back(r);
      vs.push_back(field.entry({r}, static_cast<int>(p), static_cast<int>(q)));
    }
    FitOptions fo;
    fo.burn_in = burn;
    fo.floor = std::max(1e-14, 1e3 * field.residual);
    try {
      rep.fit = fit_exponential_decay(rs, vs, fo);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      notes.push_back("fit skipped: " + std::string(e.what()));
    }
    if (st.quasifree()) {
      try {
        rep.poles = momentum_poles(st);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleOnUnitCircle) throw;
        notes.push_back("pole scan: " + std::string(e.what()));
      }
    }
  } else {
    if (!st.quasifree())
      throw Error(ErrorKind::QuadraticNotSupported, "decay analysis for D >= 2 needs a quasifree stencil");
    rep.route = "momentum_poles";
    PoleOptions po;
    if (!c.grid.empty()) po.transverse_grid = c.grid[0];
    for (int a = 0; a < D; ++a) {
      const PoleScan ps = momentum_poles(st, a, po);
      rep.xi_bound.push_back(ps.xi);
      if (a == 0) rep.poles = ps;
    }
  }
  Artifact a;
  a.result = to_json(rep);
  a.result["notes"] = notes;
  a.table.columns = {"beta_re", "beta_im", "modulus", "multiplicity"};
  for (std::size_t i = 0; i < rep.modes.modes.size(); ++i)
    a.table.rows.push_back({rep.modes.modes[i].real(), rep.modes.modes[i].imag(), std::abs(rep.modes.modes[i]),
                            static_cast<double>(rep.modes.multiplicity[i])});
  a.residuals = {{"difference_residual", rep.difference_residual}};
  return a;
}

// ---- figures ------------------------------------------------------------

Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return {{"columns", t.columns}, {"rows", rows}};
}

Artifact fig1_left(const RunConfig& c) {
  const int N = c.grid.empty() ? 400 : c.grid[0];
  const int rmax = std::min(60, N / 2);
  XYChainParams p;
  p.mu = 0.0;
  p.alpha = 0.2;
  p.eta = 1.0;
  p.phi = 2.0 * M_PI / 5.0;
  p.extent = {N};
  Artifact a;
  Table& t = a.table;
  t.columns = {"r", "qf_abs_g00", "qf_exact", "qf_beta_line", "q_abs_g00", "q_abs_g01", "q_beta_line"};
  std::vector<CovarianceField> fields;
  std::vector<double> beta;
  for (double zeta : {0.0, 0.25}) {
    p.zeta = zeta;
    const CouplingStencil st = xy_chain_stencil(p);
    fields.push_back(solve_steady_dense(build_dense(st)));
    const DecayModes dm = decay_modes(build_difference_stencil(st));
    double b = 0.0;
    for (const cd m : dm.modes) b = std::max(b, std::abs(m));
    beta.push_back(b);
    a.residuals["zeta_" + number_text(zeta)] = fields.back().residual;
  }
  // the qf line uses the closed form; the quadratic line is anchored at r = 10
  const XYExactGamma e1 = xy_chain_exact_gamma(1, p.phi, p.eta);
  const double anchor = std::abs(fields[1].entry({10}, 0, 0)) / std::pow(beta[1], 10);
  for (int r = 1; r <= rmax; ++r) {
    const XYExactGamma ex = xy_chain_exact_gamma(r, p.phi, p.eta);
    t.rows.push_back({static_cast<double>(r), std::abs(fields[0].entry({r}, 0, 0)), std::abs(ex.value),
                      std::abs(e1.value) * std::pow(std::abs(ex.z_minus), r - 1),
                      std::abs(fields[1].entry({r}, 0, 0)), std::abs(fields[1].entry({r}, 0, 1)),
                      anchor * std::pow(beta[1], r)});
  }
  a.result = table_json(t);
  a.result["beta"] = beta;
  return a;
}

Artifact fig1_right(const RunConfig& c) {
  const int G = c.grid.empty() ? 4096 : c.grid[0];
  const std::vector<double> kappas{0.0, 0.5, 1.0};
  const int n = 201;
  Artifact a;
  Table& t = a.table;
  t.columns = {"phi", "gap_kappa0", "gap_kappa0.5", "gap_kappa1", "formula"};
  t.rows.assign(n, {});
  for (int i = 0; i < n; ++i) {
    XYChainParams p;
    p.alpha = 0.5;
    p.phi = -M_PI_2 + 2.0 * M_PI * i / (n - 1);
    const CouplingStencil st = xy_chain_stencil(p);
    auto& row = t.rows[static_cast<std::size_t>(i)];
    row.push_back(p.phi);
    for (double k : kappas) row.push_back(dissipative_gap_momentum(append_aux_dissipator(st, k), {G}).gap);
    row.push_back(std::cos(p.phi) >= 0 ? 1.0 - std::cos(p.phi) : 1.0 + std::cos(p.phi));
  }
  a.result = table_json(t);
  return a;
}

CovarianceField boson_field(int D, double eta, const std::vector<int>& grid) {
  CriticalBosonParams p;
  p.D = D;
  p.eta = eta;
  MomentumSolveOptions o;
  o.skip_singular = eta == 1.0;
  o.zero_mode_correction = eta == 1.0 && D == 3;
  return solve_steady_momentum(critical_boson_stencil(p), grid, o);
}

Artifact fig2_1d(const RunConfig& c, bool diagonal) {
  const int G = c.grid.empty() ? 4096 : c.grid[0];
  std::vector<double> eps{1e-3, 1e-4, 1e-5, 1e-6};
  if (!diagonal) eps.push_back(0.0);
  Artifact a;
  Table& t = a.table;
  t.columns = {"r"};
  std::vector<CovarianceField> fields;
  for (double e : eps) {
    t.columns.push_back("num_eta-1=" + number_text(e));
    t.columns.push_back("exact_eta-1=" + number_text(e));
    fields.push_back(boson_field(1, 1.0 + e, {G}));
  }
  const int rmax = std::min(G / 2, 1000);
  for (int r = 0; r <= rmax; ++r) {
    std::vector<double> row{static_cast<double>(r)};
    for (std::size_t i = 0; i < eps.size(); ++i) {
      row.push_back(fields[i].entry({r}, 0, diagonal ? 0 : 1));
      const CriticalBoson1D ex = critical_boson_exact_1d(r, 1.0 + eps[i]);
      row.push_back(diagonal ? ex.gpp : ex.gpm);
    }
    t.rows.push_back(std::move(row));
  }
  a.result = table_json(t);
  return a;
}

// Samples along the x axis and the lattice diagonal.
template <class F>
void directional_rows(Table& t, int D, int nmax, F&& fill) {
  for (int dir = 0; dir < 2; ++dir)
    for (int n = 1; n <= nmax; ++n) {
      Displacement r(static_cast<std::size_t>(D), 0);
      if (dir == 0)
        r[0] = n;
      else
        for (auto& v : r) v = n;
      std::vector<double> rv(r.begin(), r.end());
      const double rn = std::sqrt(static_cast<double>(dir == 0 ? 1 : D)) * n;
      std::vector<double> row{static_cast<double>(dir), rn, std::log(rn)};
      fill(r, rv, rn, row);
      t.rows.push_back(std::move(row));
    }
}

Artifact fig2_c(const RunConfig& c) {
  const std::vector<int> grid = grid_or(c, 2, 1024);
  const std::vector<double> eps{1e-4, 1e-6};
  Artifact a;
  Table& t = a.table;
  t.columns = {"direction", "r", "ln_r"};
  std::vector<CovarianceField> fields;
  for (double e : eps) {
    t.columns.push_back("g_pp_eta-1=" + number_text(e));
    t.columns.push_back("law_eta-1=" + number_text(e));
    fields.push_back(boson_field(2, 1.0 + e, grid));
  }
  directional_rows(t, 2, grid[0] / 4, [&](const Displacement& r, const std::vector<double>& rv, double, auto& row) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      row.push_back(fields[i].entry(r, 0, 0));
      row.push_back(critical_boson_asymptotics(2, 1.0 + eps[i], rv).gpp);
    }
  });
  a.result = table_json(t);
  return a;
}

Artifact fig2_offdiag(const RunConfig& c, int D) {
  const std::vector<int> grid = grid_or(c, D, D == 2 ? 1024 : 128);
  const CovarianceField f = boson_field(D, 1.0, grid);
  Artifact a;
  Table& t = a.table;
  t.columns = {"direction", "r", "ln_r", "g_pm", "law", D == 2 ? "r_times_g_pm" : "r2_times_g_pm"};
  directional_rows(t, D, grid[0] / 4, [&](const Displacement& r, const std::vector<double>& rv, double rn, auto& row) {
    const double g = f.entry(r, 0, 1);
    row.push_back(g);
    row.push_back(critical_boson_asymptotics(D, 1.0, rv).gpm);
    row.push_back(g * (D == 2 ? rn : rn * rn));
  });
  a.result = table_json(t);
  return a;
}

Artifact fig2_e(const RunConfig& c) {
  const std::vector<int> grid = grid_or(c, 3, 128);
  const CovarianceField f = boson_field(3, 1.0, grid);
  Artifact a;
  Table& t = a.table;
  t.columns = {"direction", "r", "ln_r", "g_pp", "law", "r_times_g_pp"};
  directional_rows(t, 3, grid[0] / 4, [&](const Displacement& r, const std::vector<double>& rv, double rn, auto& row) {
    const double g = f.entry(r, 0, 0);
    row.push_back(g);
    row.push_back(critical_boson_asymptotics(3, 1.0, rv).gpp);
    row.push_back(g * rn);
  });
  a.result = table_json(t);
  a.result["limit"] = 9.0 / (4.0 * M_PI);
  return a;
}

Artifact cmd_figure(const RunConfig& c) {
  const std::string& f = c.figure;
  if (f == "fig1-left") return fig1_left(c);
  if (f == "fig1-right") return fig1_right(c);
  if (f == "fig2-a") return fig2_1d(c, true);
  if (f == "fig2-b") return fig2_1d(c, false);
  if (f == "fig2-c") return fig2_c(c);
  if (f == "fig2-d") return fig2_offdiag(c, 2);
  if (f == "fig2-e") return fig2_e(c);
  if (f == "fig2-f") return fig2_offdiag(c, 3);
  throw Error(ErrorKind::UnknownFigure, "unknown figure '" + f + "'");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
      return kExitParse;
    case ErrorKind::UnknownFigure:
    case ErrorKind::InvalidArgument:
      return kExitUsage;
    default:
      return kExitSolver;
  }
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << dump_json({{"error", std::string(kind)}, {"message", message}}, 0) << '\n';
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Steady: return "steady";
    case Command::Gap: return "gap";
    case Command::GapPath: return "gap-path";
    case Command::Decay: return "decay";
    case Command::Figure: return "figure";
  }
  return "?";
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  if (!c.model_path.empty()) j["model"] = c.model_path;
  if (!c.preset.empty()) j["preset"] = c.preset;
  Json params = Json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  j["params"] = params;
  j["grid"] = c.grid;
  j["tol"] = c.tol;
  j["format"] = c.format == OutputFormat::Json ? "json" : "csv";
  switch (c.command) {
    case Command::Steady: j["method"] = c.method; break;
    case Command::Gap: j["sweep"] = c.sweep; break;
    case Command::GapPath: {
      Json to = Json::object();
      for (const auto& [k, v] : c.to_params) to[k] = v;
      j["to_params"] = to;
      if (!c.to_model_path.empty()) j["to_model"] = c.to_model_path;
      j["kappa"] = c.kappa;
      j["samples"] = c.samples;
      break;
    }
    case Command::Figure: j["figure"] = c.figure; break;
    default: break;
  }
  return j;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Artifact art;
  try {
    switch (c.command) {
      case Command::Steady: art = cmd_steady(c); break;
      case Command::Gap: art = cmd_gap(c); break;
      case Command::GapPath: art = cmd_gap_path(c); break;
      case Command::Decay: art = cmd_decay(c); break;
      case Command::Figure: art = cmd_figure(c); break;
    }
  } catch (const Error& e) {
    report_error(err, e.kind_name(), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitSolver;
  }
  Json meta;
  meta["command"] = command_name(c.command);
  meta["version"] = library_version();
  meta["config"] = config_json(c);
  meta["residuals"] = art.residuals;
  std::string text;
  if (c.format == OutputFormat::Json)
    text = dump_json({{"metadata", meta}, {"result", art.result}});
  else
    text = dump_csv(meta, art.table);
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
      report_error(err, "InvalidArgument", "cannot write '" + c.out_path + "'");
      return kExitUsage;
    }
    f << text;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady states, gaps and correlation decay of quadratic Lindbladian lattice models"};
  app.set_version_flag("--version", std::string(library_version()));
  RunConfig c;
  std::vector<std::string> params, to_params;
  std::string grid, format = "json";

  app.add_option("--model", c.model_path, "Model definition file");
  app.add_option("--preset", c.preset, "Built-in model: xy_chain | critical_boson");
  app.add_option("--param", params, "Preset parameter key=value (repeatable)");
  app.add_option("--grid", grid, "Grid sizes or finite extent, e.g. 64 or 64,64");
  app.add_option("--tol", c.tol, "Residual tolerance factor");
  app.add_option("--out", c.out_path, "Output file (default: stdout)");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.require_subcommand(1);

  auto* steady = app.add_subcommand("steady", "Steady-state covariance field");
  steady->add_option("--method", c.method, "auto | dense | momentum")->check(CLI::IsMember({"auto", "dense", "momentum"}));
  auto* gap = app.add_subcommand("gap", "Dissipative gap, optionally swept over a preset parameter");
  gap->add_option("--sweep", c.sweep, "key=start:stop:count");
  auto* path = app.add_subcommand("gap-path", "Gap along a path switched through the auxiliary dissipator");
  path->add_option("--to-param", to_params, "End-point parameter key=value (repeatable)");
  path->add_option("--to-model", c.to_model_path, "End-point model file");
  path->add_option("--kappa", c.kappa, "Auxiliary dissipator rate");
  path->add_option("--samples", c.samples, "Samples per path leg");
  auto* decay = app.add_subcommand("decay", "Decay modes, pole scan and fitted decay rate");
  auto* figure = app.add_subcommand("figure", "Data for a figure panel");
  figure->add_option("name", c.figure, "fig1-left | fig1-right | fig2-a ... fig2-f")->required();

  for (auto* sub : {steady, gap, path, decay, figure}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  if (steady->parsed()) c.command = Command::Steady;
  if (gap->parsed()) c.command = Command::Gap;
  if (path->parsed()) c.command = Command::GapPath;
  if (decay->parsed()) c.command = Command::Decay;
  if (figure->parsed()) c.command = Command::Figure;
  c.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;

  auto split_params = [&](const std::vector<std::string>& in, std::map<std::string, std::string>& dst) {
    for (const auto& kv : in) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) return false;
      dst[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return true;
  };
  if (!split_params(params, c.params) || !split_params(to_params, c.to_params)) {
    report_error(err, "UsageError", "parameters must be key=value");
    return kExitUsage;
  }
  if (!grid.empty()) {
    std::string tok;
    std::istringstream gs(grid);
    while (std::getline(gs, tok, ',')) {
      try {
        const int v = std::stoi(tok);
        if (v < 1) throw std::invalid_argument("size");
        c.grid.push_back(v);
      } catch (const std::logic_error&) {
        report_error(err, "UsageError", "bad --grid '" + grid + "'");
        return kExitUsage;
      }
    }
  }
  return run(c, out, err);
}

}  // namespace lindcorr
