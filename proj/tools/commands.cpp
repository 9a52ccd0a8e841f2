#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hirota/direct.hpp"
#include "hirota/field_io.hpp"
#include "hirota/presets.hpp"
#include "hirota/traceform.hpp"
#include "hirota/verify.hpp"
#include "hirota/version.hpp"

namespace hirota::cli {

namespace {

using nlohmann::json;

struct Source {
  std::string preset;
  std::string config;
  std::optional<double> xmin, xmax, tmin, tmax;
  std::optional<std::size_t> nx, nt;
  std::string out = "-";
};

void add_source(CLI::App* cmd, Source& s, bool grid) {
  auto* p = cmd->add_option("--preset", s.preset, "Preset name (see `presets`)");
  auto* c = cmd->add_option("--config", s.config, "JSON configuration file");
  p->excludes(c);
  if (grid) {
    cmd->add_option("--xmin", s.xmin);
    cmd->add_option("--xmax", s.xmax);
    cmd->add_option("--nx", s.nx);
    cmd->add_option("--tmin", s.tmin);
    cmd->add_option("--tmax", s.tmax);
    cmd->add_option("--nt", s.nt);
  }
  cmd->add_option("--out", s.out, "Output path, - for stdout");
}

Preset load(const Source& s) {
  if (s.preset.empty() == s.config.empty()) throw Error(ErrorCode::BadConfig, "give exactly one of --preset or --config");
  Preset p;
  if (!s.preset.empty()) {
    p = preset(s.preset);
  } else {
    std::ifstream in(s.config);
    if (!in) throw Error(ErrorCode::BadConfig, "cannot read " + s.config);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::BadConfig, e.what());
    }
    p = preset_from_json(doc);
  }
  if (s.xmin) p.grid.xmin = *s.xmin;
  if (s.xmax) p.grid.xmax = *s.xmax;
  if (s.nx) p.grid.nx = *s.nx;
  if (s.tmin) p.grid.tmin = *s.tmin;
  if (s.tmax) p.grid.tmax = *s.tmax;
  if (s.nt) p.grid.nt = *s.nt;
  if (p.grid.nx < 2 || p.grid.nt < 2 || !(p.grid.xmax > p.grid.xmin) || !(p.grid.tmax > p.grid.tmin))
    throw Error(ErrorCode::BadConfig, "grid needs at least 2 points per axis and increasing ranges");
  return p;
}

template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::BadConfig, "cannot write " + path);
  write(f);
}

cplx parse_complex(const std::string& text) {
  std::stringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw Error(ErrorCode::BadConfig, "bad complex number '" + text + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw Error(ErrorCode::BadConfig, "bad complex number '" + text + "'");
  }
  return {re, im};
}

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownPreset:
    case ErrorCode::BadConfig:
    case ErrorCode::InvalidBackground:
    case ErrorCode::DefocusingUnsupported:
    case ErrorCode::EigenvalueTooCloseToSigma:
    case ErrorCode::DuplicateEigenvalue:
    case ErrorCode::InvalidEigenpair:
    case ErrorCode::BadSearchBox:
    case ErrorCode::OutsideDomain:
    case ErrorCode::ZeroArgument:
    case ErrorCode::BranchPointSingular:
    case ErrorCode::BadContour:
      return kBadInput;
    default:
      return kVerifyFailed;
  }
}

json check(double value, double tol, bool pass) { return {{"value", value}, {"tol", tol}, {"pass", pass}}; }

TraceInput trace_input(const Preset& p) {
  TraceInput in;
  in.bg = p.bg;
  for (const auto& s : p.seeds)
    (s.rank == NormingRank::Rank2 ? in.double_zeros : in.simple_zeros).push_back(s.z);
  return in;
}

// ---- verbs ----

int cmd_presets(const std::string& format, std::ostream& out) {
  if (format == "json") {
    json all = json::array();
    for (const auto& n : preset_names()) all.push_back(preset_to_json(preset(n)));
    out << json{{"schema_version", kSchemaVersion}, {"presets", all}}.dump(2) << '\n';
    return kOk;
  }
  for (const auto& n : preset_names()) {
    const Preset p = preset(n);
    const cplx z = p.seeds.front().z;
    out << n << "  alpha=" << p.bg.alpha << " beta=" << p.bg.beta << " zeta1=" << z.real() << (z.imag() < 0 ? "" : "+")
        << z.imag() << "i" << (p.localized() ? "" : "  (off-spectrum breather)") << '\n';
  }
  return kOk;
}

int cmd_solve(const Source& s, const std::string& format, std::ostream& out, std::ostream& err) {
  const Preset p = load(s);
  FieldGrid grid = eval_field(p.grid, p.spec());
  grid.preset = p.name;
  grid.version = kVersion;
  emit(s.out, out, [&](std::ostream& os) {
    if (format == "json")
      os << field_to_json(grid).dump() << '\n';
    else
      write_csv(os, grid);
  });
  if (const auto masked = grid.masked_count()) {
    err << "warning: " << masked << " grid points failed to evaluate and were masked\n";
    return kVerifyFailed;
  }
  return kOk;
}

json sample_json(const ScatteringSample& s) {
  return {{"z", complex_to_json(s.z)},
          {"a", matrix_to_json(s.a)},
          {"b", matrix_to_json(s.b)},
          {"abar", matrix_to_json(s.abar)},
          {"bbar", matrix_to_json(s.bbar)},
          {"rho", matrix_to_json(s.rho)},
          {"rhobar", matrix_to_json(s.rhobar)},
          {"det_S_deviation", std::abs(det4(s.S) - 1.0)}};
}

json symmetry_json(const SymmetryReport& r) {
  return {{"first", r.first}, {"third", r.third}, {"rho_symmetric", r.rho_symmetric},
          {"second", r.second}, {"abar", r.abar},   {"max", r.max()}};
}

int cmd_scatter(const Source& s, const std::vector<std::string>& zs, int real_orbits, int circle_orbits,
                const ScatterOptions& opt, std::ostream& out) {
  const Preset p = load(s);
  const Field field = make_field(p.spec());
  const Background bg = with_measured_minus(p.bg, field, opt.t0);
  std::vector<cplx> points;
  for (const auto& z : zs) points.push_back(parse_complex(z));
  if (points.empty()) points = symmetric_sigma_points(bg, real_orbits, circle_orbits);

  std::vector<ScatteringSample> samples;
  json js = json::array();
  for (cplx z : points) {
    samples.push_back(scattering_matrix(field, z, bg, opt));
    js.push_back(sample_json(samples.back()));
  }
  json sym = nullptr;
  try {
    sym = symmetry_json(audit_symmetries(samples, bg));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MissingPartner) throw;
  }
  const json report{{"schema_version", kSchemaVersion}, {"version", kVersion}, {"preset", p.name},
                    {"t0", opt.t0},                     {"L", opt.L},            {"tol", opt.tol},
                    {"Qminus", matrix_to_json(bg.Qminus)}, {"samples", js},       {"symmetry", sym}};
  emit(s.out, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return kOk;
}

int cmd_roundtrip(const Source& s, double tol, const std::string& box_text, std::ostream& out) {
  const Preset p = load(s);
  if (!p.localized()) throw Error(ErrorCode::OutsideDomain, p.name + ": seed eigenvalues are not in D+");
  const Field field = make_field(p.spec());
  const Background bg = with_measured_minus(p.bg, field, 0.0);

  SearchBox box{};
  if (!box_text.empty()) {
    std::stringstream ss(box_text);
    std::vector<double> v;
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_complex(cell).real());
    if (v.size() != 4) throw Error(ErrorCode::BadConfig, "--box takes re_min,re_max,im_min,im_max");
    box = {v[0], v[1], v[2], v[3]};
  } else {
    double r0 = 1e300, r1 = -1e300, i0 = 1e300, i1 = -1e300;
    for (const auto& sd : p.seeds) {
      r0 = std::min(r0, sd.z.real());
      r1 = std::max(r1, sd.z.real());
      i0 = std::min(i0, sd.z.imag());
      i1 = std::max(i1, sd.z.imag());
    }
    box = {r0 - 1.0, r1 + 1.0, 0.5 * i0, i1 + 1.0};
  }
  const SpectrumResult found = find_discrete_spectrum(field, box, bg);

  bool pass = true;
  json seeds = json::array();
  for (const auto& sd : p.seeds) {
    double best = 1e300;
    for (const auto& z : found.zeros) best = std::min(best, std::abs(z.z - sd.z));
    const bool ok = best <= tol;
    pass = pass && ok;
    seeds.push_back({{"z", complex_to_json(sd.z)}, {"error", found.zeros.empty() ? json(nullptr) : json(best)}, {"recovered", ok}});
  }
  json zeros = json::array();
  for (const auto& z : found.zeros)
    zeros.push_back({{"z", complex_to_json(z.z)}, {"multiplicity", z.multiplicity}, {"residual", z.residual}});

  double rho_max = 0.0, det_dev = 0.0;
  for (cplx z : symmetric_sigma_points(bg, 4, 2)) {
    const ScatteringSample smp = scattering_matrix(field, z, bg);
    rho_max = std::max(rho_max, norm_max(smp.rho));
    det_dev = std::max(det_dev, std::abs(det4(smp.S) - 1.0));
  }
  const bool rho_ok = rho_max <= 1e-3;
  pass = pass && rho_ok;

  const json report{{"schema_version", kSchemaVersion},
                    {"version", kVersion},
                    {"preset", p.name},
                    {"tol", tol},
                    {"search_box", {box.re_min, box.re_max, box.im_min, box.im_max}},
                    {"seeds", seeds},
                    {"zeros", zeros},
                    {"diagnostics", found.diagnostics},
                    {"rho_max", check(rho_max, 1e-3, rho_ok)},
                    {"det_S_deviation", det_dev},
                    {"pass", pass}};
  emit(s.out, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return pass ? kOk : kVerifyFailed;
}

int cmd_verify(const Source& s, double h, double tol, std::size_t probes, std::ostream& out) {
  const Preset p = load(s);
  const SolitonSpec spec = p.spec();
  const Field field = make_field(spec);
  const Region2D region{p.grid.xmin, p.grid.xmax, p.grid.tmin, p.grid.tmax};
  bool pass = true;
  json checks;

  const ResidualReport res = pde_residual(field, region, probes, h, p.bg);
  const bool res_ok = res.max_residual <= tol;
  checks["pde_residual"] = check(res.max_residual, tol, res_ok);
  checks["pde_residual"]["argmax"] = {res.argmax_x, res.argmax_t};
  checks["pde_residual"]["h"] = h;
  checks["pde_residual"]["points"] = res.points;
  pass = pass && res_ok;

  GridAxes coarse{p.grid.xmin, p.grid.xmax, 41, p.grid.tmin, p.grid.tmax, 31};
  const FieldGrid grid = eval_field(coarse, spec);
  const double sym = symmetry_residual(grid);
  const bool sym_ok = sym <= 1e-10 && grid.masked_count() == 0;
  checks["symmetry"] = check(sym, 1e-10, sym_ok);
  checks["symmetry"]["masked"] = grid.masked_count();
  pass = pass && sym_ok;

  json skipped = json::array();
  if (p.localized()) {
    const DecayReport d = boundary_decay(field, 0.0, p.bg, 20.0);
    double expected = 1e300;
    for (const auto& e : spec.entries)
      if (e.zeta.imag() > 0.0) expected = std::min(expected, 2.0 * uniformize(e.zeta, p.bg).lambda.imag());
    const bool right_ok = d.right_deviation <= 1e-8, left_ok = d.left_deviation <= 1e-8;
    const bool rate_ok = std::abs(d.rate - expected) <= 0.1 * expected;
    checks["decay_right"] = check(d.right_deviation, 1e-8, right_ok);
    checks["decay_left"] = check(d.left_deviation, 1e-8, left_ok);
    checks["decay_rate"] = check(d.rate, 0.1 * expected, rate_ok);
    checks["decay_rate"]["expected"] = expected;
    pass = pass && right_ok && left_ok && rate_ok;

    const ThetaCondition th = theta_condition(trace_input(p));
    const double measured = wrap_angle(std::arg(det2(p.bg.Qplus * dagger(d.Qminus_measured))));
    const double dist = angle_distance(th.primary(), measured);
    const bool th_ok = dist <= 1e-3;
    checks["theta_condition"] = check(dist, 1e-3, th_ok);
    checks["theta_condition"]["measured"] = measured;
    checks["theta_condition"]["simple_sign"] = th.simple_sign;
    checks["theta_condition"]["combined_sign"] = th.combined_sign;
    checks["theta_condition"]["Qminus"] = matrix_to_json(d.Qminus_measured);
    pass = pass && th_ok;
  } else {
    skipped = {"decay", "theta_condition"};
  }

  const json report{{"schema_version", kSchemaVersion}, {"version", kVersion}, {"preset", p.name},
                    {"checks", checks},                 {"skipped", skipped}, {"pass", pass}};
  emit(s.out, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return pass ? kOk : kVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reflectionless solitons and breathers of the matrix Hirota equation on a nonzero background"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format = "csv";
  auto* presets = app.add_subcommand("presets", "List built-in parameter sets");
  std::string presets_format = "text";
  presets->add_option("--format", presets_format)->check(CLI::IsMember({"text", "json"}));

  Source solve_src;
  auto* solve = app.add_subcommand("solve", "Evaluate Q(x,t) on a grid");
  add_source(solve, solve_src, true);
  solve->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  Source scatter_src;
  std::vector<std::string> zs;
  int real_orbits = 4, circle_orbits = 2;
  ScatterOptions sopt;
  auto* scatter = app.add_subcommand("scatter", "Direct scattering of a constructed solution");
  add_source(scatter, scatter_src, false);
  scatter->add_option("--z", zs, "Spectral point re,im (repeatable); default samples the continuum");
  scatter->add_option("--real-orbits", real_orbits)->check(CLI::NonNegativeNumber);
  scatter->add_option("--circle-orbits", circle_orbits)->check(CLI::NonNegativeNumber);
  scatter->add_option("--L", sopt.L, "Half-width of the integration window")->check(CLI::PositiveNumber);
  scatter->add_option("--tol", sopt.tol, "Integration tolerance")->check(CLI::PositiveNumber);
  scatter->add_option("--t0", sopt.t0);

  Source rt_src;
  double rt_tol = 1e-3;
  std::string box;
  auto* roundtrip = app.add_subcommand("roundtrip", "Recover the seed eigenvalues by direct scattering");
  add_source(roundtrip, rt_src, false);
  roundtrip->add_option("--tol", rt_tol)->check(CLI::PositiveNumber);
  roundtrip->add_option("--box", box, "re_min,re_max,im_min,im_max");

  Source ver_src;
  double h = 2.5e-3, ver_tol = 1e-5;
  std::size_t probes = 200;
  auto* verify = app.add_subcommand("verify", "Residual, decay, symmetry and phase checks");
  add_source(verify, ver_src, false);
  verify->set_help_flag("--help", "Print this help message and exit");
  verify->add_option("--h", h, "Finite-difference step")->check(CLI::PositiveNumber);
  verify->add_option("--tol", ver_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--probes", probes)->check(CLI::PositiveNumber);
  // Preset grid ranges set the verified region.
  verify->add_option("--xmin", ver_src.xmin);
  verify->add_option("--xmax", ver_src.xmax);
  verify->add_option("--tmin", ver_src.tmin);
  verify->add_option("--tmax", ver_src.tmax);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*presets) return cmd_presets(presets_format, out);
    if (*solve) return cmd_solve(solve_src, format, out, err);
    if (*scatter) return cmd_scatter(scatter_src, zs, real_orbits, circle_orbits, sopt, out);
    if (*roundtrip) return cmd_roundtrip(rt_src, rt_tol, box, out);
    if (*verify) return cmd_verify(ver_src, h, ver_tol, probes, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kBadInput;
}

}  // namespace hirota::cli
