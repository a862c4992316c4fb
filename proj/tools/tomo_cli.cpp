// tomo: command-line front end for the tomography library.
//
// Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 numeric error.

#include "checks.hpp"
#include "tomo/tomo.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace tomo;

namespace {

constexpr int exit_ok = 0, exit_check = 1, exit_usage = 2, exit_numeric = 3;

/// Grid defaults and numeric options; a JSON config overrides these and
/// command-line flags override the config.
struct Settings {
  std::size_t angles = 64;
  std::size_t xpoints = 256;
  double xmax = 8.0;
  std::size_t qpoints = 401;
  double qmax = 6.0;
  std::size_t spin_alpha = 0;  // 0 selects 4j+2
  std::size_t spin_beta = 0;   // 0 selects 2j+2 Gauss-Legendre nodes or 4j+3 uniform nodes
  std::uint64_t seed = 42;
  TransformOptions transform;
  TransitionOptions transition;
};

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void apply_config(const json& c, Settings& s) {
  static const std::vector<std::string> top{"grid", "spin", "seed", "transform", "transition"};
  for (const auto& [k, v] : c.items())
    if (std::find(top.begin(), top.end(), k) == top.end()) throw FormatError("unknown config key '" + k + "'");
  if (c.contains("grid")) {
    const json& g = c.at("grid");
    take(g, "angles", s.angles);
    take(g, "xpoints", s.xpoints);
    take(g, "xmax", s.xmax);
    take(g, "qpoints", s.qpoints);
    take(g, "qmax", s.qmax);
  }
  if (c.contains("spin")) {
    take(c.at("spin"), "alpha", s.spin_alpha);
    take(c.at("spin"), "beta", s.spin_beta);
  }
  take(c, "seed", s.seed);
  if (c.contains("transform")) {
    const json& t = c.at("transform");
    auto& o = s.transform;
    take(t, "taper_fraction", o.taper_fraction);
    take(t, "ringing_floor", o.ringing_floor);
    take(t, "interpolation_error", o.interpolation_error);
    take(t, "degenerate_band", o.degenerate_band);
    take(t, "min_angles", o.min_angles);
    take(t, "density_k_max", o.density_k_max);
    take(t, "density_dk", o.density_dk);
    take(t, "density_dmu", o.density_dmu);
    take(t, "hermitian_tolerance", o.hermitian_tolerance);
    take(t, "negativity_fraction", o.negativity_fraction);
    take(t, "complex_residue", o.complex_residue);
  }
  if (c.contains("transition")) {
    const json& t = c.at("transition");
    auto& o = s.transition;
    take(t, "radius", o.radius);
    take(t, "dr", o.dr);
    take(t, "angles", o.angles);
    take(t, "tail_bound", o.tail_bound);
    take(t, "residue_bound", o.residue_bound);
  }
}

[[noreturn]] void unknown_state(const std::string& d, const std::string& why = "") {
  fail(ErrorKind::UnknownState, "cannot parse state '" + d + "'" + (why.empty() ? "" : ": " + why));
}

std::vector<double> numbers(const std::string& text, const std::string& desc) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      unknown_state(desc);
    }
    if (used != item.size()) unknown_state(desc);
  }
  return v;
}

/// fock:n, coherent:re,im, classical-point:x0,p0[,eps], or a Tomogram manifest path.
Tomogram parse_state(const std::string& d) {
  const auto colon = d.find(':');
  const std::string kind = d.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : d.substr(colon + 1);
  try {
    if (kind == "fock") {
      const auto v = numbers(args, d);
      if (v.size() != 1 || v[0] != std::floor(v[0])) unknown_state(d);
      return fock_tomogram(FockLabel(static_cast<int>(v[0])));
    }
    if (kind == "coherent") {
      const auto v = numbers(args, d);
      if (v.size() != 2) unknown_state(d);
      return coherent_tomogram(CoherentLabel({v[0], v[1]}));
    }
    if (kind == "classical-point") {
      const auto v = numbers(args, d);
      if (v.size() != 2 && v.size() != 3) unknown_state(d);
      return classical_point_tomogram(v[0], v[1], v.size() == 3 ? v[2] : 0.05);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) unknown_state(d, e.what());
    throw;
  }
  if (colon == std::string::npos && fs::exists(d)) return tomogram_from_json(read_json_file(d));
  unknown_state(d);
}

/// Density matrix from a SpinState manifest or a bare nested array of rows
/// whose entries are numbers or [re, im] pairs.
SpinState read_spin_matrix(double j, const std::string& path) {
  const json doc = read_json_file(path);
  if (doc.is_object()) return spin_state_from_json(doc);
  const std::size_t n = spin_dim(j);
  if (!doc.is_array() || doc.size() != n) throw FormatError("spin matrix must have 2j+1 rows");
  SpinState s{j, Eigen::MatrixXcd(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    if (!doc[r].is_array() || doc[r].size() != n) throw FormatError("spin matrix must be square");
    for (std::size_t c = 0; c < n; ++c) {
      const json& v = doc[r][c];
      s.rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v.is_array() ? cplx(v.at(0).get<double>(), v.at(1).get<double>()) : cplx(v.get<double>(), 0.0);
    }
  }
  return s;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create " + dir);
}

std::string join(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

json base_meta(const Settings& s, const std::string& state) {
  return {{"state", state}, {"seed", s.seed}};
}

void write_tomogram(const std::string& dir, const Tomogram& t, json meta) {
  ensure_dir(dir);
  const auto& smp = t.samples();
  write_csv_file(join(dir, "tomogram.csv"), "X", smp.x, "phi", smp.phi, smp.values);
  write_json_file(join(dir, "tomogram.json"), to_json(t, std::move(meta)));
}

void write_spin_tomogram(const std::string& dir, const SpinTomogram& t, json meta) {
  ensure_dir(dir);
  write_json_file(join(dir, "spin_tomogram.json"), to_json(t, std::move(meta)));
  for (std::size_t m = 0; m < t.values.size(); ++m) {
    const std::string name = "spin_tomogram_m" + std::to_string(m) + ".csv";
    std::ofstream out(join(dir, name.c_str()));
    write_csv(out, "alpha", t.alpha, "beta", t.beta, t.values[m]);
  }
}

SpinTomogram make_spin_tomogram(const SpinState& s, const Settings& cfg, const std::string& rule) {
  const auto na = cfg.spin_alpha ? cfg.spin_alpha : static_cast<std::size_t>(std::lround(4.0 * s.j)) + 2;
  const auto tj = static_cast<std::size_t>(std::lround(2.0 * s.j));
  if (rule == "gauss") return spin_tomogram(s, full_circle(na), cfg.spin_beta ? cfg.spin_beta : tj + 2);
  return spin_tomogram(s, full_circle(na), Grid1D(0.0, pi, cfg.spin_beta ? cfg.spin_beta : 2 * tj + 3));
}

double rel_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

Grid1D x_grid(const Settings& s) { return Grid1D(-s.xmax, s.xmax, s.xpoints); }
Grid1D q_grid(const Settings& s) { return Grid1D(-s.qmax, s.qmax, s.qpoints); }

int run_state(const Settings& s, const std::string& desc, const std::string& out, const std::string& rule) {
  if (desc.rfind("spin:", 0) == 0) {
    const std::string rest = desc.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) unknown_state(desc, "expected spin:j:matrix-file");
    const auto jv = numbers(rest.substr(0, colon), desc);
    if (jv.size() != 1 || !is_half_integer(jv[0]) || jv[0] <= 0.0) unknown_state(desc);
    const SpinState st = read_spin_matrix(jv[0], rest.substr(colon + 1));
    json meta = base_meta(s, desc);
    write_spin_tomogram(out, make_spin_tomogram(st, s, rule), meta);
    return exit_ok;
  }
  const Tomogram t = parse_state(desc);
  const Tomogram smp = t.is_analytic() ? Tomogram(sample(t, x_grid(s), optical_angles(s.angles))) : t;
  write_tomogram(out, smp, base_meta(s, desc));
  return exit_ok;
}

int run_reconstruct(const Settings& s, const std::string& input, const std::string& mode, const std::string& out) {
  const Tomogram t = tomogram_from_json(read_json_file(input));
  const auto& smp = t.samples();
  // Reprojection for the round-trip metric only; its interpolation guard is relaxed.
  TransformOptions metric = s.transform;
  metric.interpolation_error = 1e-2;
  json meta = base_meta(s, input);
  meta["mode"] = mode;
  ensure_dir(out);
  if (mode == "wigner") {
    const WignerGrid w = wigner_from_tomogram(t, q_grid(s), q_grid(s), s.transform);
    const Tomogram back = tomogram_from_wigner(w, smp.x, smp.phi, metric);
    meta["roundtrip_rel_l2"] = rel_l2(back.samples().values, smp.values);
    write_csv_file(join(out, "wigner.csv"), "q", w.q, "p", w.p, w.values);
    write_json_file(join(out, "wigner.json"), to_json(w, meta));
  } else if (mode == "classical") {
    const PhaseDensity f = phase_density_from_tomogram(t, q_grid(s), q_grid(s), s.transform);
    const Tomogram back = classical_tomogram(f, smp.x, smp.phi, metric);
    meta["roundtrip_rel_l2"] = rel_l2(back.samples().values, smp.values);
    write_csv_file(join(out, "phase_density.csv"), "q", f.q, "p", f.p, f.values);
    write_json_file(join(out, "phase_density.json"), to_json(f, meta));
  } else if (mode == "density") {
    const DensityKernel rho = density_from_tomogram(t, s.transform);
    // The diagonal is the position density, i.e. the phi = 0 column.
    if (std::abs(smp.phi.min()) < 1e-12) {
      const Eigen::VectorXd diag = rho.values.diagonal().real();
      meta["position_density_rel_l2"] = (diag - smp.values.col(0)).norm() / smp.values.col(0).norm();
    }
    meta["trace"] = trapezoid<double>(rho.x.size(), rho.x.spacing(), [&](std::size_t i) {
      return rho.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    });
    write_csv_file(join(out, "density_real.csv"), "x", rho.x, "xp", rho.x, rho.values.real());
    write_csv_file(join(out, "density_imag.csv"), "x", rho.x, "xp", rho.x, rho.values.imag());
    write_json_file(join(out, "density.json"), to_json(rho, meta));
  } else {
    throw CLI::ValidationError("--mode", "must be wigner, density or classical");
  }
  for (const char* k : {"roundtrip_rel_l2", "position_density_rel_l2", "trace"})
    if (meta.contains(k)) std::printf("%s %.6e\n", k, meta[k].get<double>());
  return exit_ok;
}

TomographicPropagator make_propagator(const std::string& h, double t, json& meta) {
  if (h == "free") return TomographicPropagator::free_motion(t);
  if (h == "oscillator") return TomographicPropagator::oscillator(t);
  const json cfg = read_json_file(h);
  Mat2 b;
  Vec2 c = Vec2::Zero();
  const json& bj = cfg.at("B");
  if (!bj.is_array() || bj.size() != 2) throw FormatError("B must be a 2x2 array over Q = (p, q)");
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) b(r, k) = bj.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(k)).get<double>();
  if (cfg.contains("C")) c = Vec2(cfg.at("C").at(0).get<double>(), cfg.at("C").at(1).get<double>());
  meta["hamiltonian_file"] = h;
  return TomographicPropagator::quadratic(linear_invariants(QuadraticHamiltonian::constant(b, c), t, 1e-3));
}

int run_evolve(const Settings& s, const std::string& desc, const std::string& h, double t, const std::string& out) {
  if (!std::isfinite(t)) throw CLI::ValidationError("-t", "must be finite");
  json meta = base_meta(s, desc);
  const TomographicPropagator p = make_propagator(h, t, meta);
  const Tomogram evolved = propagate_tomogram(parse_state(desc), p);
  meta["hamiltonian"] = h;
  meta["t"] = t;
  const Tomogram smp(sample(evolved, x_grid(s), optical_angles(s.angles)));
  write_tomogram(out, smp, meta);
  json prop{{"t", t},
            {"ordering", "Q = (p, q)"},
            {"Lambda", {{p.Lambda(0, 0), p.Lambda(0, 1)}, {p.Lambda(1, 0), p.Lambda(1, 1)}}},
            {"Delta", {p.Delta(0), p.Delta(1)}}};
  write_json_file(join(out, "propagator.json"), prop);
  return exit_ok;
}

int run_overlap(const Settings& s, const std::string& a, const std::string& b) {
  const double p = transition_probability(parse_state(a), parse_state(b), s.transition);
  json r{{"a", a}, {"b", b}, {"transition_probability", p}};
  std::cout << r.dump(1) << '\n';
  return exit_ok;
}

int run_spin_tomogram(const Settings& s, const std::string& input, double j, const std::string& rule,
                      const std::string& out) {
  const json doc = read_json_file(input);
  const SpinState st = doc.is_object() ? spin_state_from_json(doc) : read_spin_matrix(j, input);
  write_spin_tomogram(out, make_spin_tomogram(st, s, rule), base_meta(s, input));
  return exit_ok;
}

int run_spin_reconstruct(const Settings& s, const std::string& input, const std::string& out) {
  const SpinState st = reconstruct_spin_state(spin_tomogram_from_json(read_json_file(input)));
  ensure_dir(out);
  write_json_file(join(out, "spin_state.json"), to_json(st, base_meta(s, input)));
  return exit_ok;
}

int run_check(const Settings& s, const std::string& suite, const std::string& report) {
  std::vector<cli::CheckResult> all;
  auto add = [&](std::vector<cli::CheckResult> v) { all.insert(all.end(), v.begin(), v.end()); };
  if (suite == "all" || suite == "cv") add(cli::cv_checks());
  if (suite == "all" || suite == "spin") add(cli::spin_checks(s.seed));
  if (suite == "all" || suite == "evolution") add(cli::evolution_checks());
  if (all.empty()) throw CLI::ValidationError("suite", "must be all, cv, spin or evolution");
  json checks = json::array();
  bool ok = true;
  char line[256];
  for (const auto& c : all) {
    if (c.bound)
      std::snprintf(line, sizeof line, "%s: %.6g <= %g: %s", c.name.c_str(), c.value, c.tolerance,
                    c.pass ? "pass" : "FAIL");
    else
      std::snprintf(line, sizeof line, "%s: %g ± %g (got %.10g): %s", c.name.c_str(), c.expected, c.tolerance,
                    c.value, c.pass ? "pass" : "FAIL");
    std::cerr << line << '\n';
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"summary", line}});
    ok = ok && c.pass;
  }
  const json r{{"suite", suite}, {"seed", s.seed}, {"checks", checks}, {"pass", ok}, {"schema", schema_version}};
  std::cout << r.dump(1) << '\n';
  if (!report.empty()) write_json_file(report, r);
  return ok ? exit_ok : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical tomography toolkit"};
  app.require_subcommand(1);

  std::string config;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  app.add_option("--config", config, "JSON file overriding grid defaults and tolerances");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "Seed for random spin states");

  std::size_t angles = 0, xpoints = 0, qpoints = 0;
  double xmax = 0.0, qmax = 0.0;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--angles", angles, "Optical angles over [0, pi)");
    sub->add_option("--xpoints", xpoints, "X samples");
    sub->add_option("--xmax", xmax, "X range is [-xmax, xmax]");
  };
  std::string out = ".";

  std::string state_desc, rule = "gauss";
  auto* c_state = app.add_subcommand("state", "Sample a library state and write CSV + JSON");
  c_state->add_option("descriptor", state_desc, "fock:n | coherent:re,im | classical-point:x0,p0[,eps] | spin:j:file")
      ->required();
  c_state->add_option("-o,--out", out, "Output directory");
  c_state->add_option("--beta-rule", rule, "Spin beta nodes: gauss or uniform")->check(CLI::IsMember({"gauss", "uniform"}));
  add_grid(c_state);

  std::string input, mode = "wigner";
  auto* c_rec = app.add_subcommand("reconstruct", "Invert a sampled tomogram");
  c_rec->add_option("input", input, "Tomogram manifest (JSON)")->required();
  c_rec->add_option("--mode", mode, "wigner | density | classical")->check(CLI::IsMember({"wigner", "density", "classical"}));
  c_rec->add_option("-o,--out", out, "Output directory");
  c_rec->add_option("--qpoints", qpoints, "Phase-space samples per axis");
  c_rec->add_option("--qmax", qmax, "Phase-space range is [-qmax, qmax]");

  std::string ham = "oscillator";
  double t = 0.0;
  auto* c_evo = app.add_subcommand("evolve", "Propagate a library state under a quadratic Hamiltonian");
  c_evo->add_option("descriptor", state_desc, "State descriptor")->required();
  c_evo->add_option("--hamiltonian", ham, "free | oscillator | JSON file with B (2x2) and C over Q = (p, q)");
  c_evo->add_option("-t,--time", t, "Evolution time")->required();
  c_evo->add_option("-o,--out", out, "Output directory");
  add_grid(c_evo);

  std::string other;
  auto* c_ovl = app.add_subcommand("overlap", "Transition probability between two states");
  c_ovl->add_option("a", state_desc, "First state")->required();
  c_ovl->add_option("b", other, "Second state")->required();

  double j = 0.5;
  auto* c_st = app.add_subcommand("spin-tomogram", "Spin tomogram of a density matrix");
  c_st->add_option("input", input, "SpinState manifest or nested JSON matrix")->required();
  c_st->add_option("-j", j, "Spin (for bare matrices)");
  c_st->add_option("--beta-rule", rule, "gauss or uniform")->check(CLI::IsMember({"gauss", "uniform"}));
  c_st->add_option("-o,--out", out, "Output directory");

  auto* c_sr = app.add_subcommand("spin-reconstruct", "Density matrix from a spin tomogram");
  c_sr->add_option("input", input, "SpinTomogram manifest")->required();
  c_sr->add_option("-o,--out", out, "Output directory");

  std::string suite = "all", report;
  auto* c_chk = app.add_subcommand("check", "Run an invariant suite and print a JSON report");
  c_chk->add_option("suite", suite, "all | cv | spin | evolution")->check(CLI::IsMember({"all", "cv", "spin", "evolution"}));
  c_chk->add_option("--report", report, "Also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    Settings s;
    if (const char* env = std::getenv("TOMO_CONFIG"); env && *env && config.empty()) config = env;
    if (!config.empty()) apply_config(read_json_file(config), s);
    if (o_seed->count()) s.seed = seed;
    for (auto* sub : {c_state, c_evo}) {
      if (sub->get_option("--angles")->count()) s.angles = angles;
      if (sub->get_option("--xpoints")->count()) s.xpoints = xpoints;
      if (sub->get_option("--xmax")->count()) s.xmax = xmax;
    }
    if (c_rec->get_option("--qpoints")->count()) s.qpoints = qpoints;
    if (c_rec->get_option("--qmax")->count()) s.qmax = qmax;
    set_threads(threads);

    if (*c_state) return run_state(s, state_desc, out, rule);
    if (*c_rec) return run_reconstruct(s, input, mode, out);
    if (*c_evo) return run_evolve(s, state_desc, ham, t, out);
    if (*c_ovl) return run_overlap(s, state_desc, other);
    if (*c_st) return run_spin_tomogram(s, input, j, rule, out);
    if (*c_sr) return run_spin_reconstruct(s, input, out);
    if (*c_chk) return run_check(s, suite, report);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == ErrorKind::UnknownState ? exit_usage : exit_numeric;
  } catch (const FormatError& e) {
    std::cerr << "FormatError: " << e.what() << '\n';
    return exit_usage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const json::exception& e) {
    std::cerr << "FormatError: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
