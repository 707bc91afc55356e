// Command-line front end: coefficient tables, spectral sweeps, stability
// scans, convergence studies, time-domain simulation, and the verification
// suite.  All output is CSV with a `# key=value` configuration header;
// numbers carry 17 significant digits.
//
// Exit codes: 0 success, 1 domain/validation error, 2 numerical failure,
// 3 verification-suite failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "substep/acceptance.hpp"
#include "substep/harness.hpp"
#include "substep/linear.hpp"
#include "substep/model_io.hpp"
#include "substep/models.hpp"
#include "substep/nonlinear.hpp"
#include "substep/spectral.hpp"
#include "substep/tableau.hpp"

namespace {

using namespace substep;

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Gamma2Rule parse_gamma2_rule(const std::string& name) {
  if (name == "paper") return Gamma2Rule::Standard;
  if (name == "double") return Gamma2Rule::Double;
  throw DomainError("--gamma2-rule must be 'paper' or 'double'");
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) {
    throw DomainError("expected a comma-separated list of numbers");
  }
  return out;
}

struct TableauArgs {
  int scheme = 3;
  double rho_inf = 0.0;
  std::string gamma2_rule = "paper";
};

void emit_tableau(std::ostream& out, const TableauArgs& args) {
  const Tableau t = build_tableau(SchemeId(args.scheme), args.rho_inf,
                                  std::nullopt, parse_gamma2_rule(args.gamma2_rule));
  out << "# command=tableau\n# scheme=" << args.scheme
      << "\n# rho_inf=" << fmt17(t.rho_inf)
      << "\n# gamma2_rule=" << args.gamma2_rule
      << "\n# gamma1=" << fmt17(t.gamma1()) << "\n";
  out << "gamma";
  for (const double g : t.gamma) out << "," << fmt17(g);
  out << "\n";
  for (int i = 0; i <= t.substeps(); ++i) {
    out << "alpha";
    for (int j = 0; j <= t.substeps(); ++j) out << "," << fmt17(t.alpha(i, j));
    out << "\n";
  }
  out << "b";
  for (int j = 0; j <= t.substeps(); ++j) out << "," << fmt17(t.b(j));
  out << "\n";
}

struct SpectralArgs {
  int scheme = 3;
  double rho_inf = 0.0;
  double xi = 0.0;
  double omega_min = 1e-2;
  double omega_max = 1e4;
  int points = 200;
  bool log_axis = false;
};

void emit_spectral(std::ostream& out, const SpectralArgs& args) {
  const Tableau t = build_tableau(SchemeId(args.scheme), args.rho_inf);
  out << "# command=spectral\n# scheme=" << args.scheme
      << "\n# rho_inf=" << fmt17(t.rho_inf) << "\n# xi=" << fmt17(args.xi)
      << "\n# omega_min=" << fmt17(args.omega_min)
      << "\n# omega_max=" << fmt17(args.omega_max)
      << "\n# points=" << args.points
      << "\n# axis=" << (args.log_axis ? "log" : "linear") << "\n";
  out << "Omega,A1,A2,rho,amplitude_decay_pct,period_error\n";

  std::vector<double> grid;
  if (args.log_axis) {
    grid = log_spaced(args.omega_min, args.omega_max, args.points);
  } else {
    if (args.points < 2 || !(args.omega_max > args.omega_min)) {
      throw DomainError("spectral: need points >= 2 and omega_max > omega_min");
    }
    for (int i = 0; i < args.points; ++i) {
      grid.push_back(args.omega_min +
                     (args.omega_max - args.omega_min) * i / (args.points - 1));
    }
  }
  for (const double Om : grid) {
    const SpectralSample m =
        measures(numerical_pair(t, {Om, args.xi, 1.0}).D, Om, args.xi);
    out << fmt17(m.Omega) << "," << fmt17(m.A1) << "," << fmt17(m.A2) << ","
        << fmt17(m.rho) << "," << fmt17(m.amplitude_decay_pct) << ","
        << fmt17(m.period_error) << "\n";
  }
}

void emit_stability(std::ostream& out, int scheme, double rho_inf) {
  const Tableau t = build_tableau(SchemeId(scheme), rho_inf);
  const std::vector<double> grid = log_spaced(1e-3, 1e8, 400);
  const std::vector<double> xis = {0.0, 0.1, 0.5, 1.0};
  const StabilityScan scan = stability_scan(t, xis, grid);
  out << "# command=stability\n# scheme=" << scheme
      << "\n# rho_inf=" << fmt17(t.rho_inf)
      << "\n# xi_list=0,0.1,0.5,1\n# omega_grid=logspace(1e-3,1e8,400)\n";
  out << "max_rho,worst_Omega,worst_xi,violations,verdict\n";
  const bool stable = scan.max_rho <= 1.0 + 1e-10 && scan.violations.empty();
  out << fmt17(scan.max_rho) << "," << fmt17(scan.worst_Omega) << ","
      << fmt17(scan.worst_xi) << "," << scan.violations.size() << ","
      << (stable ? "stable" : "UNSTABLE") << "\n";
}

struct ModelChoice {
  std::optional<LinearBenchmark> linear;
  std::optional<NonlinearBenchmark> nonlinear;
  std::string name;
};

ModelChoice resolve_model(const std::string& spec_name) {
  ModelChoice mc;
  mc.name = spec_name;
  if (spec_name == "sdof48") {
    mc.linear = sdof_damped_forced();
  } else if (spec_name == "modal2") {
    mc.linear = modal_two_dof();
  } else if (spec_name == "pendulum") {
    mc.nonlinear = pendulum();
  } else if (spec_name.rfind("chain:", 0) == 0) {
    const int n = std::stoi(spec_name.substr(6));
    mc.nonlinear = spring_chain(n);
  } else {
    LinearBenchmark bench;
    bench.model = read_linear_model_file(spec_name);
    bench.u0 = Eigen::VectorXd::Zero(bench.model.dofs());
    bench.v0 = Eigen::VectorXd::Zero(bench.model.dofs());
    mc.linear = std::move(bench);
  }
  return mc;
}

struct SimulateArgs {
  std::string model;
  int scheme = 3;
  double rho_inf = 0.0;
  double dt = 0.01;
  double t_end = 1.0;
  std::string out_path;
  std::string gamma2_rule = "paper";
  int stride = 1;
  double rtol = 1e-8;
  double atol = 1e-8;
  int max_iter = 50;
  std::string u0_csv, v0_csv;
};

void emit_trajectory(std::ostream& out, const SimulateArgs& args,
                     const Trajectory& traj, double rho_resolved) {
  out << "# command=simulate\n# model=" << args.model
      << "\n# scheme=" << args.scheme << "\n# rho_inf=" << fmt17(rho_resolved)
      << "\n# dt=" << fmt17(args.dt) << "\n# t_end=" << fmt17(args.t_end)
      << "\n# stride=" << args.stride << "\n";
  const Eigen::Index d = traj.front().u.size();
  out << "t";
  for (Eigen::Index i = 0; i < d; ++i) out << ",U_" << i;
  for (Eigen::Index i = 0; i < d; ++i) out << ",V_" << i;
  for (Eigen::Index i = 0; i < d; ++i) out << ",A_" << i;
  out << "\n";
  for (const StateVector& st : traj) {
    out << fmt17(st.t);
    for (Eigen::Index i = 0; i < d; ++i) out << "," << fmt17(st.u(i));
    for (Eigen::Index i = 0; i < d; ++i) out << "," << fmt17(st.v(i));
    for (Eigen::Index i = 0; i < d; ++i) out << "," << fmt17(st.a(i));
    out << "\n";
  }
}

void run_simulate(std::ostream& out, const SimulateArgs& args) {
  const Tableau t = build_tableau(SchemeId(args.scheme), args.rho_inf,
                                  std::nullopt, parse_gamma2_rule(args.gamma2_rule));
  ModelChoice mc = resolve_model(args.model);

  Eigen::VectorXd u0, v0;
  const Eigen::Index d =
      mc.linear ? mc.linear->model.dofs() : mc.nonlinear->model.dofs();
  if (!args.u0_csv.empty()) {
    const std::vector<double> vals = parse_list(args.u0_csv);
    if (static_cast<Eigen::Index>(vals.size()) != d) {
      throw DomainError("--u0 must list one value per DOF");
    }
    u0 = Eigen::Map<const Eigen::VectorXd>(vals.data(), d);
  } else {
    u0 = mc.linear ? mc.linear->u0 : mc.nonlinear->u0;
  }
  if (!args.v0_csv.empty()) {
    const std::vector<double> vals = parse_list(args.v0_csv);
    if (static_cast<Eigen::Index>(vals.size()) != d) {
      throw DomainError("--v0 must list one value per DOF");
    }
    v0 = Eigen::Map<const Eigen::VectorXd>(vals.data(), d);
  } else {
    v0 = mc.linear ? mc.linear->v0 : mc.nonlinear->v0;
  }

  Trajectory traj;
  if (mc.linear) {
    traj = simulate(mc.linear->model, t, u0, v0, 0.0, args.t_end, args.dt,
                    SimulateOptions{args.stride});
  } else {
    const NewtonSettings settings{args.rtol, args.atol, args.max_iter};
    traj = simulate(mc.nonlinear->model, t, u0, v0, 0.0, args.t_end, args.dt,
                    settings);
    if (args.stride > 1) {
      Trajectory thinned;
      for (std::size_t j = 0; j < traj.size(); ++j) {
        if (j % static_cast<std::size_t>(args.stride) == 0 || j + 1 == traj.size()) {
          thinned.push_back(traj[j]);
        }
      }
      traj = std::move(thinned);
    }
  }
  emit_trajectory(out, args, traj, t.rho_inf);
}

struct ConvergeArgs {
  std::string model = "sdof48";
  int scheme = 3;
  double rho_inf = 0.0;
  std::string dts = "0.1,0.05,0.025,0.0125";
  double horizon = 5.62;
  double ref_dt = 1e-5;
};

void run_converge(std::ostream& out, const ConvergeArgs& args) {
  const Tableau t = build_tableau(SchemeId(args.scheme), args.rho_inf);
  const std::vector<double> dts = parse_list(args.dts);
  const ModelChoice mc = resolve_model(args.model);

  ConvergenceResult result;
  if (mc.linear) {
    if (!mc.linear->exact) {
      throw DomainError("converge: model '" + args.model +
                        "' has no exact solution; use a builtin with one");
    }
    result = convergence_study(*mc.linear, t, dts, args.horizon);
  } else {
    result = convergence_study(*mc.nonlinear, t, dts, args.horizon, args.ref_dt);
  }

  out << "# command=converge\n# model=" << args.model
      << "\n# scheme=" << args.scheme << "\n# rho_inf=" << fmt17(t.rho_inf)
      << "\n# horizon=" << fmt17(args.horizon) << "\n";
  out << "dt,error_u,error_v,error_a\n";
  for (const ErrorReport& rep : result.errors) {
    out << fmt17(rep.dt) << "," << fmt17(rep.error_u) << ","
        << fmt17(rep.error_v) << "," << fmt17(rep.error_a) << "\n";
  }
  out << "slope," << fmt17(result.slope_u) << "," << fmt17(result.slope_v) << ","
      << fmt17(result.slope_a) << "\n";
}

int run_verify(std::ostream& out, int only) {
  out << "# command=verify\n";
  if (only > 0) {
    out << "# only=" << only << "\n";
  }
  std::vector<acceptance::CriterionResult> results;
  if (only > 0) {
    results.push_back(acceptance::run_criterion(only));
  } else {
    results = acceptance::run_all();
  }
  const bool ok = acceptance::print_results(out, results);
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite sub-step implicit time integrators for structural "
               "dynamics: coefficient tables, spectral analysis, and "
               "time-domain simulation"};
  app.require_subcommand(1);

  TableauArgs tab;
  CLI::App* cmd_tab = app.add_subcommand("tableau", "Print a coefficient tableau");
  cmd_tab->add_option("--scheme", tab.scheme, "Sub-step count s (1..6)")->required();
  cmd_tab->add_option("--rho-inf", tab.rho_inf,
                      "High-frequency spectral radius ([-1,1] for s=2, [0,1] "
                      "for s>=3; ignored for s=1)");
  cmd_tab->add_option("--gamma2-rule", tab.gamma2_rule,
                      "gamma_2 rule for s=3: 'paper' = (3+sqrt(3))/3*gamma_1, "
                      "'double' = 2*gamma_1");

  SpectralArgs sp;
  CLI::App* cmd_sp =
      app.add_subcommand("spectral", "Sweep spectral measures over Omega");
  cmd_sp->add_option("--scheme", sp.scheme)->required();
  cmd_sp->add_option("--rho-inf", sp.rho_inf);
  cmd_sp->add_option("--xi", sp.xi, "Damping ratio");
  cmd_sp->add_option("--omega-min", sp.omega_min);
  cmd_sp->add_option("--omega-max", sp.omega_max);
  cmd_sp->add_option("--points", sp.points);
  cmd_sp->add_flag("--log", sp.log_axis, "Log-spaced Omega grid");

  int st_scheme = 3;
  double st_rho = 0.0;
  CLI::App* cmd_st =
      app.add_subcommand("stability", "Scan the spectral radius for stability");
  cmd_st->add_option("--scheme", st_scheme)->required();
  cmd_st->add_option("--rho-inf", st_rho);

  ConvergeArgs cv;
  CLI::App* cmd_cv =
      app.add_subcommand("converge", "Convergence-order study on a benchmark");
  cmd_cv->add_option("--model", cv.model,
                     "sdof48 | modal2 | pendulum | chain:N | model file");
  cmd_cv->add_option("--scheme", cv.scheme)->required();
  cmd_cv->add_option("--rho-inf", cv.rho_inf);
  cmd_cv->add_option("--dts", cv.dts, "Comma-separated step sizes");
  cmd_cv->add_option("--horizon", cv.horizon);
  cmd_cv->add_option("--ref-dt", cv.ref_dt,
                     "Reference step for models without an exact solution");

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "Integrate a model in time");
  cmd_sim->add_option("--model", sim.model,
                      "sdof48 | modal2 | pendulum | chain:N | model file")
      ->required();
  cmd_sim->add_option("--scheme", sim.scheme)->required();
  cmd_sim->add_option("--rho-inf", sim.rho_inf);
  cmd_sim->add_option("--dt", sim.dt)->required();
  cmd_sim->add_option("--t-end", sim.t_end)->required();
  cmd_sim->add_option("--out", sim.out_path, "Output CSV path (default stdout)");
  cmd_sim->add_option("--gamma2-rule", sim.gamma2_rule);
  cmd_sim->add_option("--stride", sim.stride, "Keep every stride-th state");
  cmd_sim->add_option("--rtol", sim.rtol, "Newton residual tolerance");
  cmd_sim->add_option("--atol", sim.atol, "Newton increment tolerance");
  cmd_sim->add_option("--max-iter", sim.max_iter, "Newton iteration cap");
  cmd_sim->add_option("--u0", sim.u0_csv, "Initial displacements (overrides)");
  cmd_sim->add_option("--v0", sim.v0_csv, "Initial velocities (overrides)");

  int verify_only = 0;
  CLI::App* cmd_ver =
      app.add_subcommand("verify", "Run the verification suite (PASS/FAIL lines)");
  cmd_ver->add_option("--only", verify_only, "Run a single criterion (1-based)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*cmd_tab) {
      emit_tableau(std::cout, tab);
    } else if (*cmd_sp) {
      emit_spectral(std::cout, sp);
    } else if (*cmd_st) {
      emit_stability(std::cout, st_scheme, st_rho);
    } else if (*cmd_cv) {
      run_converge(std::cout, cv);
    } else if (*cmd_sim) {
      if (!sim.out_path.empty()) {
        std::ofstream file(sim.out_path);
        if (!file) {
          throw DomainError("simulate: cannot open output file '" + sim.out_path +
                            "'");
        }
        run_simulate(file, sim);
      } else {
        run_simulate(std::cout, sim);
      }
    } else if (*cmd_ver) {
      return run_verify(std::cout, verify_only);
    }
  } catch (const DomainError& e) {
    std::cerr << "error: domain: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: domain: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
