#include <CLI11.hpp>
#include <Eigen/Dense>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "hypan/errors.hpp"
#include "hypan/evolve.hpp"
#include "hypan/expr.hpp"
#include "hypan/geometry.hpp"
#include "hypan/io.hpp"
#include "hypan/localize.hpp"
#include "hypan/modela.hpp"
#include "hypan/spectral.hpp"
#include "hypan/symbol.hpp"
#include "hypan/version.hpp"

namespace fs = std::filesystem;
using namespace hypan;

namespace {

struct Run {
  ConfigFile cfg;
  std::string cfg_text;
  std::string command;
  fs::path out_dir;
  unsigned seed = 0;
  int threads = 1;
  fs::path cfg_dir;
};

std::string header_block(const Run& run) {
  std::ostringstream os;
  os << "tool_version " << version_string << "\n";
  os << "config_hash " << fnv1a_hash(run.cfg_text) << "\n";
  os << "seed " << run.seed << "\n";
  return os.str();
}

fs::path resolve(const Run& run, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || fs::exists(path)) return path;
  return run.cfg_dir / path;
}

double param_double(const Run& run, const std::string& key, double fallback) {
  auto v = lookup_value(run.cfg, "params", key);
  return v ? parse_double(*v) : fallback;
}

int param_int(const Run& run, const std::string& key, int fallback) {
  auto v = lookup_value(run.cfg, "params", key);
  return v ? parse_int(*v) : fallback;
}

double param_mu(const Run& run) {
  if (auto v = lookup_value(run.cfg, "params", "mu")) return parse_double(*v);
  if (auto v = lookup_value(run.cfg, "params", "a"))
    return mu_from_parameter(parse_complex(*v));
  throw config_error("config needs [params] mu or a");
}

CotangentPoint load_point(const Run& run, int d) {
  double t = 0.0, tau = 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d), xi = Eigen::VectorXd::Zero(d);
  xi[d - 1] = 1.0;
  if (const ConfigSection* sec = find_section(run.cfg, "point")) {
    if (const ConfigEntry* e = find_entry(*sec, "t")) t = parse_double(e->value);
    if (const ConfigEntry* e = find_entry(*sec, "tau")) tau = parse_double(e->value);
    if (const ConfigEntry* e = find_entry(*sec, "x")) {
      auto vals = parse_double_list(e->value);
      if (static_cast<int>(vals.size()) != d) throw config_error("[point] x needs d entries");
      for (int j = 0; j < d; ++j) x[j] = vals[static_cast<size_t>(j)];
    }
    if (const ConfigEntry* e = find_entry(*sec, "xi")) {
      auto vals = parse_double_list(e->value);
      if (static_cast<int>(vals.size()) != d) throw config_error("[point] xi needs d entries");
      for (int j = 0; j < d; ++j) xi[j] = vals[static_cast<size_t>(j)];
    }
  }
  return make_point(d, t, x, tau, xi);
}

const char* class_name(ManifoldClass c) {
  switch (c) {
    case ManifoldClass::involutive:
      return "involutive";
    case ManifoldClass::symplectic:
      return "symplectic";
    default:
      return "neither involutive nor symplectic";
  }
}

const char* verdict_name(ConeVerdict v) {
  switch (v) {
    case ConeVerdict::member:
      return "member";
    case ConeVerdict::boundary:
      return "boundary";
    case ConeVerdict::non_member:
      return "non-member";
    default:
      return "indeterminate";
  }
}

int run_analyze(const Run& run) {
  SystemSymbol sys = load_system(resolve(run, require_value(run.cfg, "run", "system")).string());
  const int d = sys.d();
  CotangentPoint rho = load_point(run, d);
  std::ostringstream rep;
  rep << header_block(run);
  rep << "system " << sys.name() << " dimension " << sys.N() << " space_dim " << d << "\n\n";

  Eigen::VectorXd x(d), xi(d);
  for (int j = 0; j < d; ++j) {
    x[j] = rho.x(j);
    xi[j] = rho.xi(j);
  }
  EigenReport eig = eigen_structure(sys, rho.t(), x, xi);
  rep << "eigenvalue clusters:";
  for (size_t k = 0; k < eig.eigenvalues.size(); ++k)
    rep << " " << format_double(eig.eigenvalues[k]) << " (alg " << eig.alg_mult[k] << ", geom "
        << eig.geom_mult[k] << ")";
  rep << "\n";
  rep << "semisimple: " << (eig.semisimple ? "true" : "false") << "\n";
  rep << "real spectrum: " << (eig.hyperbolicity_violation ? "false" : "true") << "\n";

  bool violation = !eig.semisimple || eig.hyperbolicity_violation;
  if (violation) rep << "semisimplicity violation at the query point\n";

  cplx det = det_symbol(sys, rho);
  rep << "det L(rho) = " << format_complex(det) << "\n";

  std::vector<PhaseVector> tangent_basis;
  if (auto chart_path = lookup_value(run.cfg, "run", "chart")) {
    ManifoldChart chart = load_chart(resolve(run, *chart_path).string());
    if (chart.layout.d != d) throw config_error("chart space_dim differs from system");
    ManifoldClass cls = classify_manifold(chart, rho.z);
    rep << "chart classification: " << class_name(cls) << "\n";
    TangentSpaceResult ts = tangent_space(chart, rho.z);
    for (int j = 0; j < ts.tangent.cols(); ++j) tangent_basis.push_back(ts.tangent.col(j));
  }

  if (std::abs(det) < 1e-8 * std::pow(std::max(rho.covector_norm(), 1.0), sys.N())) {
    try {
      LocalizedSystem loc = localize(sys, rho);
      rep << "characteristic multiplicity r = " << loc.base.r << "\n";
      rep << "localized determinant: " << loc.det_poly.to_string(sys.layout().names()) << "\n";
      if (!tangent_basis.empty()) {
        StrictHyperbolicityResult sh = transversal_strict_hyperbolicity(loc, tangent_basis);
        rep << "transversally strictly hyperbolic: " << (sh.verdict ? "true" : "false") << " ("
            << sh.samples_checked << " samples)\n";
      }
    } catch (const assumption_error& e) {
      rep << "localization failed: " << e.what() << "\n";
      violation = true;
    }
  } else {
    rep << "point is not characteristic; localization skipped\n";
  }

  std::vector<CloudPoint> cloud;
  std::mt19937_64 rng(run.seed + 1);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < 32; ++s) {
    CloudPoint cp;
    cp.t = 0.2 * gauss(rng);
    cp.x = Eigen::VectorXd::Zero(d);
    cp.xi = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j) {
      cp.x[j] = 0.5 * gauss(rng);
      cp.xi[j] = gauss(rng);
    }
    if (cp.xi.norm() < 1e-8) cp.xi[0] = 1.0;
    cp.xi.normalize();
    cloud.push_back(cp);
  }
  try {
    DiagonalizabilityReport diag = uniform_diagonalizability_probe(sys, cloud);
    rep << "diagonalizability max condition: " << format_double(diag.max_condition) << " over "
        << cloud.size() << " points, " << diag.flagged.size() << " flagged\n";
    if (!diag.flagged.empty()) violation = true;
  } catch (const assumption_error& e) {
    rep << "diagonalizability probe: " << e.what() << "\n";
    violation = true;
  }

  write_text((run.out_dir / "analyze.txt").string(), rep.str());
  std::cout << rep.str();
  return violation ? 2 : 0;
}

int run_cones(const Run& run) {
  SystemSymbol sys = load_system(resolve(run, require_value(run.cfg, "run", "system")).string());
  ManifoldChart chart =
      load_chart(resolve(run, require_value(run.cfg, "run", "chart")).string());
  CotangentPoint rho = load_point(run, sys.d());
  LocalizedSystem loc = localize(sys, rho);

  PhaseVector theta = PhaseVector::Zero(sys.layout().size());
  theta[sys.layout().tau()] = 1.0;
  ConeOracle::Options copt;
  copt.seed = run.seed ? run.seed : copt.seed;
  ConeOracle cone(sys.layout(), loc.det_poly, theta, copt);
  ConeInclusionReport inc = cone_inclusion_report(cone, chart, rho.z);

  std::ostringstream rep;
  rep << header_block(run);
  rep << "localized determinant: " << loc.det_poly.to_string(sys.layout().names()) << "\n";
  rep << "lineality dimension: " << cone.lineality().cols() << "\n";
  rep << "time direction in hyperbolicity cone: "
      << verdict_name(cone.hyperbolicity_membership(theta)) << "\n";
  rep << "propagation cone inside sigma-orthogonal of tangent: "
      << (inc.c_subset_sigma_orth ? "true" : "false") << "\n";
  rep << "propagation cone meets tangent space: " << (inc.c_meets_tangent ? "true" : "false")
      << "\n";
  rep << "propagation cone strictly larger than its tangent part: "
      << (inc.c_strictly_larger ? "true" : "false") << "\n";
  if (inc.c_meets_tangent)
    rep << "witness in tangent: " << inc.witness_in_tangent.transpose() << "\n";
  if (inc.c_strictly_larger)
    rep << "witness outside tangent: " << inc.witness_outside_tangent.transpose() << "\n";
  if (inc.indeterminate) rep << "warning: some membership queries indeterminate\n";

  write_text((run.out_dir / "cones.txt").string(), rep.str());
  std::cout << rep.str();
  return 0;
}

int run_simulate(const Run& run) {
  double mu = param_mu(run);
  auto kappas = parse_double_list(require_value(run.cfg, "params", "kappa"));
  if (kappas.empty()) throw config_error("[params] kappa list is empty");
  double kappa = kappas.front();
  int n = param_int(run, "n", 129);
  double lambda = param_double(run, "lambda", 1.0);
  double T = param_double(run, "T", 1.0);

  ModeDiscretization disc = mode_operators(mu, kappa, n, lambda);
  double dt = param_double(run, "dt", 0.5 * cfl_dt(disc));
  Eigen::VectorXcd U0 = run.seed ? initial_random(disc, run.seed) : initial_gaussian(disc);
  EnergyReport er = evolve_energy(disc, T, dt, U0);

  std::vector<std::vector<std::string>> rows;
  for (size_t k = 0; k < er.times.size(); ++k)
    rows.push_back({format_double(er.times[k]), format_double(er.norm2[k]),
                    format_double(er.suu[k]), format_double(er.energy[k]),
                    format_double(er.seminorm1[k])});
  write_csv((run.out_dir / "timeseries.csv").string(), {"t", "norm2", "SUU", "E", "seminorm1"},
            rows);

  GronwallResult gw = gronwall_check(er);
  std::ostringstream rep;
  rep << header_block(run);
  rep << "mu " << format_double(mu) << " kappa " << format_double(kappa) << " n " << n
      << " dt " << format_double(dt) << " T " << format_double(T) << "\n";
  rep << "energy bound (SU,U) <= e^{2t}(SU,U)(0): "
      << (std::abs(mu) < 1.0 ? (er.energy_bound_ok ? "holds" : "violated") : "not applicable")
      << " worst ratio " << format_double(er.worst_bound_ratio) << "\n";
  rep << "gronwall check (K=2): " << (gw.passed ? "passed" : "failed") << " worst ratio "
      << format_double(gw.worst_ratio) << " amplification " << format_double(gw.amplification)
      << "\n";
  if (er.aborted) rep << "integration aborted on non-finite state\n";
  write_text((run.out_dir / "simulate.txt").string(), rep.str());
  std::cout << rep.str();
  return 0;
}

int run_growth(const Run& run) {
  double mu = param_mu(run);
  auto kappas = parse_double_list(require_value(run.cfg, "params", "kappa"));
  if (kappas.empty()) throw config_error("[params] kappa list is empty");
  int n = param_int(run, "n", 129);
  double lambda = param_double(run, "lambda", 1.0);
  double T = param_double(run, "T", 2.0);

  std::vector<double> rates_abs, rates_norm;
  std::vector<std::vector<std::string>> rows;
  for (double kappa : kappas) {
    double abscissa = guarded_abscissa(mu, kappa, n);
    ModeDiscretization disc = mode_operators(mu, kappa, n, lambda);
    double dt = 0.5 * cfl_dt(disc);
    EnergyReport er = evolve_energy(disc, T, dt, initial_gaussian(disc));
    double nrate = norm_growth_rate(er);
    rates_abs.push_back(abscissa);
    rates_norm.push_back(nrate);
    rows.push_back({format_double(kappa), std::to_string(n), format_double(abscissa),
                    format_double(nrate)});
  }
  write_csv((run.out_dir / "growth.csv").string(), {"kappa", "n", "abscissa", "norm_rate"},
            rows);

  GrowthFit fit = growth_rate_fit(kappas, rates_abs);
  std::ostringstream rep;
  rep << header_block(run);
  rep << "mu " << format_double(mu) << " n " << n << "\n";
  for (size_t k = 0; k < kappas.size(); ++k)
    rep << "kappa " << format_double(kappas[k]) << " abscissa "
        << format_double(rates_abs[k]) << " norm rate " << format_double(rates_norm[k]) << "\n";
  if (fit.no_growth) {
    rep << "verdict: no growth\n";
  } else {
    rep << "fit: p " << format_double(fit.p) << " c " << format_double(fit.c) << " s_star "
        << format_double(fit.s_star) << " residual " << format_double(fit.fit_residual) << "\n";
  }
  write_text((run.out_dir / "growth.txt").string(), rep.str());
  std::cout << rep.str();
  return 0;
}

int run_verify(const Run& run) {
  double mu = param_double(run, "mu", 0.5);
  double kappa = 2.0;
  double lambda = param_double(run, "lambda", 1.0);
  int n = param_int(run, "n", 65);
  ModeDiscretization disc = mode_operators(mu, kappa, n, lambda);

  std::ostringstream rep;
  rep << header_block(run);
  bool ok = true;
  auto check = [&](const char* what, bool pass) {
    rep << (pass ? "pass" : "FAIL") << " " << what << "\n";
    ok = ok && pass;
  };

  double id1 = (disc.Bh * disc.Xh + (1.0 - mu * mu) * (disc.Dmat * disc.Yh).real() -
                disc.Xh * disc.Ah)
                   .norm();
  double id2 = (disc.Dmat.adjoint() * disc.Xh.cast<cplx>() +
                (1.0 - mu * mu) * disc.Ch.cast<cplx>() * disc.Yh -
                disc.Yh * disc.Ah.cast<cplx>())
                   .norm();
  double scale = disc.Ah.norm() * disc.Xh.norm() + 1.0;
  check("first-order block identity", id1 <= 1e-12 * scale);
  check("second-order block identity", id2 <= 1e-12 * scale);

  ReSGCheckResult sg = re_sg_identity_check(disc, lambda);
  check("Re(S Gh) has corner blocks only",
        sg.corner_residual <= 1e-12 * (disc.Ah.norm() + 1.0) * (1.0 + lambda));

  check("symmetrizer Hermitian",
        (symmetrizer_assemble(disc, lambda) -
         symmetrizer_assemble(disc, lambda).adjoint())
                .norm() == 0.0);

  if (std::abs(mu) < 1.0) {
    OscillatorCheckResult osc = oscillator_spectrum_check(disc);
    // second-order truncation: error ~ (grid spacing)^2 / 4
    double hs = disc.h * std::sqrt(std::max(disc.kappa, 1.0));
    check("oscillator ground level", osc.rel_error <= hs * hs);
  }
  CommutatorCheckResult comm = commutator_inequality_check(disc, 50, run.seed + 11);
  check("commutator inequality", comm.max_ratio <= 1.0 + 1e-2);

  write_text((run.out_dir / "verify.txt").string(), rep.str());
  std::cout << rep.str();
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis and per-mode simulation of first-order hyperbolic systems"};
  app.set_version_flag("--version", version_string);

  std::string config_path, out_dir = "out";
  unsigned seed = 0;
  int threads = 1;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed recorded in outputs");
  app.add_option("--threads", threads, "worker thread count");
  CLI11_PARSE(app, argc, argv);

  try {
    Eigen::setNbThreads(threads);
    Run run;
    run.cfg_text = read_file(config_path);
    run.cfg = parse_ini(run.cfg_text);
    run.command = require_value(run.cfg, "run", "command");
    run.out_dir = out_dir;
    run.seed = seed;
    run.threads = threads;
    run.cfg_dir = fs::path(config_path).parent_path();
    fs::create_directories(run.out_dir);

    if (run.command == "analyze") return run_analyze(run);
    if (run.command == "cones") return run_cones(run);
    if (run.command == "simulate") return run_simulate(run);
    if (run.command == "growth") return run_growth(run);
    if (run.command == "verify") return run_verify(run);
    throw config_error("unknown command: " + run.command);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const resolution_error& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const assumption_error& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
