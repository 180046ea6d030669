// Command-line driver for convergence, stabilisation and Poisson-ratio
// studies. Reports are printed as tables and optionally written as CSV.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdgvoigt/gates.hpp"
#include "hdgvoigt/study.hpp"

namespace {

struct Options {
  std::string case_id = "sinusoidal2d";
  std::string elem = "quad";
  std::string pattern = "alternating";
  std::string plane = "strain";
  std::string postprocess = "opt3";
  std::string out;
  std::string vtk;
  int degree = 1;
  std::vector<int> levels = {4, 8, 16, 32};
  double tau = 3.0;
  double nu = -1.0;
  bool assert_gates = false;
  std::vector<double> tau_list = {0.1, 0.3, 1, 3, 10, 30, 100, 300, 1000};
  std::vector<double> nu_list = {0.49, 0.499, 0.4999, 0.49999};
};

void add_common_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--case", opt.case_id, "analytic case")
      ->check(CLI::IsMember({"sinusoidal2d", "incompressible2d"}));
  cmd->add_option("--elem", opt.elem, "element type")->check(CLI::IsMember({"quad", "tri"}));
  cmd->add_option("--pattern", opt.pattern, "triangle splitting pattern")
      ->check(CLI::IsMember({"alternating", "single-diagonal"}));
  cmd->add_option("--degree", opt.degree, "polynomial degree k")->check(CLI::Range(1, 3));
  cmd->add_option("--levels", opt.levels, "refinement levels (subdivisions per side)")
      ->delimiter(',');
  cmd->add_option("--tau", opt.tau, "stabilisation parameter");
  cmd->add_option("--nu", opt.nu, "Poisson ratio override");
  cmd->add_option("--plane", opt.plane, "plane assumption")
      ->check(CLI::IsMember({"strain", "stress"}));
  cmd->add_option("--postprocess", opt.postprocess, "rotational constraint of the post-process")
      ->check(CLI::IsMember({"opt1", "opt2", "opt3"}));
  cmd->add_option("--out", opt.out, "CSV report path");
  cmd->add_option("--vtk", opt.vtk, "directory for VTK field dumps");
  cmd->add_flag("--assert", opt.assert_gates, "exit nonzero if the expected-order gates fail");
  cmd->set_config("--config", "", "key=value configuration file (flags override)");
}

hdgv::StudyConfig to_config(const Options& opt) {
  hdgv::StudyConfig cfg;
  cfg.case_id = opt.case_id == "sinusoidal2d" ? hdgv::CaseId::sinusoidal2d
                                              : hdgv::CaseId::incompressible2d;
  cfg.elem = opt.elem == "quad" ? hdgv::CellType::quadrilateral : hdgv::CellType::triangle;
  cfg.pattern = opt.pattern == "alternating" ? hdgv::TriPattern::alternating
                                             : hdgv::TriPattern::single_diagonal;
  cfg.degree = opt.degree;
  cfg.levels = opt.levels;
  cfg.tau = opt.tau;
  cfg.nu = opt.nu;
  cfg.plane = opt.plane == "strain" ? hdgv::PlaneAssumption::strain
                                    : hdgv::PlaneAssumption::stress;
  cfg.constraint = opt.postprocess == "opt1" ? hdgv::RotationalConstraint::barycentre_moment
                   : opt.postprocess == "opt2" ? hdgv::RotationalConstraint::mean_curl_of_uh
                                               : hdgv::RotationalConstraint::boundary_trace_curl;
  cfg.out_csv = opt.out;
  cfg.vtk_dir = opt.vtk;
  return cfg;
}

void print_report(const hdgv::ConvergenceReport& report) {
  std::printf("%6s %12s %10s %12s %12s %12s %8s %8s %8s\n", "n", "h", "ndof", "err_u", "err_L",
              "err_ustar", "eoc_u", "eoc_L", "eoc_u*");
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const hdgv::ReportRow& row = report.rows[r];
    std::printf("%6d %12.4e %10d %12.4e %12.4e %12.4e", row.n, row.h, row.ndof_trace, row.err_u,
                row.err_L, row.err_ustar);
    if (r == 0)
      std::printf("%9s %8s %8s\n", "-", "-", "-");
    else
      std::printf(" %8.3f %8.3f %8.3f\n", row.eoc_u, row.eoc_L, row.eoc_ustar);
  }
}

int report_gate_failures(const std::vector<std::string>& fails) {
  if (fails.empty()) {
    std::printf("gates: all passed\n");
    return 0;
  }
  for (const std::string& f : fails) std::printf("gate failed: %s\n", f.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybridisable DG solver for 2D linear elasticity in Voigt notation"};
  app.require_subcommand(1);

  Options run_opt, tau_opt, nu_opt;
  tau_opt.levels = {8};
  nu_opt.elem = "tri";
  nu_opt.pattern = "single-diagonal";
  nu_opt.case_id = "incompressible2d";

  CLI::App* run_cmd = app.add_subcommand("run", "h-convergence study");
  add_common_options(run_cmd, run_opt);
  CLI::App* tau_cmd = app.add_subcommand("tau-sweep", "error versus stabilisation parameter");
  add_common_options(tau_cmd, tau_opt);
  tau_cmd->add_option("--tau-list", tau_opt.tau_list, "stabilisation values")->delimiter(',');
  CLI::App* nu_cmd = app.add_subcommand("nu-sweep", "convergence for a range of Poisson ratios");
  add_common_options(nu_cmd, nu_opt);
  nu_cmd->add_option("--nu-list", nu_opt.nu_list, "Poisson ratios")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const hdgv::StudyConfig cfg = to_config(run_opt);
      const hdgv::ConvergenceReport report = hdgv::run_convergence(cfg);
      print_report(report);
      if (run_opt.assert_gates)
        return report_gate_failures(hdgv::convergence_gate_failures(cfg, report));
    } else if (tau_cmd->parsed()) {
      const hdgv::StudyConfig cfg = to_config(tau_opt);
      const hdgv::TauSweepReport report = hdgv::run_tau_sweep(cfg, tau_opt.tau_list);
      std::printf("%12s %12s %12s %12s\n", "tau", "err_u", "err_L", "err_ustar");
      for (const hdgv::TauSweepRow& r : report.rows)
        std::printf("%12.4e %12.4e %12.4e %12.4e\n", r.tau, r.err_u, r.err_L, r.err_ustar);
      if (tau_opt.assert_gates) return report_gate_failures(hdgv::tau_sweep_gate_failures(report));
    } else if (nu_cmd->parsed()) {
      const hdgv::StudyConfig cfg = to_config(nu_opt);
      const auto reports = hdgv::run_nu_sweep(cfg, nu_opt.nu_list);
      for (const auto& [nu, report] : reports) {
        std::printf("nu = %g\n", nu);
        print_report(report);
      }
      if (nu_opt.assert_gates)
        return report_gate_failures(hdgv::nu_sweep_gate_failures(cfg, reports));
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  return 0;
}
