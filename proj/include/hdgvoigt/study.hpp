// Refinement, stabilisation and Poisson-ratio studies: drives the full
// mesh -> assemble -> condense -> solve -> recover -> post-process pipeline,
// computes observed convergence orders and writes CSV reports.
#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdgvoigt/global_solver.hpp"
#include "hdgvoigt/local_assembly.hpp"
#include "hdgvoigt/manufactured.hpp"
#include "hdgvoigt/mapping.hpp"
#include "hdgvoigt/mesh.hpp"
#include "hdgvoigt/postprocess.hpp"
#include "hdgvoigt/vtk.hpp"

namespace hdgv {

enum class CaseId { sinusoidal2d, incompressible2d };

struct StudyConfig {
  CaseId case_id = CaseId::sinusoidal2d;
  CellType elem = CellType::quadrilateral;
  TriPattern pattern = TriPattern::alternating;
  int degree = 1;
  std::vector<int> levels = {4, 8, 16, 32};
  double tau = 3.0;
  double nu = -1.0;  // negative: keep the case default
  PlaneAssumption plane = PlaneAssumption::strain;
  RotationalConstraint constraint = RotationalConstraint::boundary_trace_curl;
  std::string out_csv;
  std::string vtk_dir;
};

inline ManufacturedCase select_case(CaseId id, double nu_override) {
  if (id == CaseId::sinusoidal2d) {
    ManufacturedCase mc = case_sinusoidal_2d();
    if (nu_override >= 0.0) mc.material.poisson_ratio = nu_override;
    return mc;
  }
  return case_incompressible_2d(nu_override >= 0.0 ? nu_override : 0.49999);
}

/// One fully solved refinement level, kept around for post-processing and
/// error evaluation.
struct LevelSolution {
  int n = 0;
  double h = 0.0;
  Mesh mesh;
  FaceTopology topo;
  ReferenceElement ref;
  ReferenceFace face_ref;
  VoigtConstitutive law;
  ManufacturedCase mc;
  ProblemData data;
  std::vector<LocalSystem> locals;
  TraceDofMap map;
  Eigen::VectorXd trace;
  SolutionFields fields;
  double err_u = 0.0, err_L = 0.0;
};

inline LevelSolution solve_level(const StudyConfig& cfg, int n) {
  LevelSolution lvl;
  lvl.n = n;
  lvl.mesh = cfg.elem == CellType::quadrilateral
                 ? structured_quad_mesh(n)
                 : structured_tri_mesh(n, cfg.pattern);
  lvl.h = lvl.mesh.h;
  lvl.mc = select_case(cfg.case_id, cfg.nu);
  lvl.mc.material.plane = cfg.plane;
  lvl.topo = extract_faces(lvl.mesh, lvl.mc.boundary);
  lvl.law = build_constitutive(lvl.mc.material, 2);
  lvl.data = make_problem(lvl.mc, lvl.law);
  lvl.ref = lagrange_reference(lvl.mesh.cell, cfg.degree);
  lvl.face_ref = reference_face(cfg.degree);

  if (!(cfg.tau > 0.0)) throw std::invalid_argument("solve_level: tau must be positive");

  std::vector<CondensedContribution> contribs;
  lvl.locals.reserve(lvl.mesh.elems.size());
  for (int e = 0; e < lvl.mesh.num_elems(); ++e) {
    const MappedElement geo = map_element(lvl.ref, lvl.face_ref, element_vertices(lvl.mesh, e));
    std::vector<ElementFaceInfo> faces;
    std::vector<int> trace_faces;
    for (std::size_t lf = 0; lf < lvl.topo.elem_faces[e].size(); ++lf) {
      const Face& face = lvl.topo.faces[lvl.topo.elem_faces[e][lf]];
      const bool left = face.left_elem == e && face.left_local == static_cast<int>(lf);
      faces.push_back({face.tag, left ? face.left_flip : face.right_flip});
      if (face.tag != FaceTag::dirichlet) trace_faces.push_back(lvl.topo.elem_faces[e][lf]);
    }
    lvl.locals.push_back(assemble_local(geo, lvl.ref, lvl.face_ref, faces, lvl.law, lvl.data, cfg.tau));
    CondensedContribution c = condense(lvl.locals.back());
    c.elem = e;
    c.global_faces = std::move(trace_faces);
    contribs.push_back(std::move(c));
  }

  lvl.map = build_trace_dofmap(lvl.topo, cfg.degree);
  const GlobalTraceSystem sys = assemble_global(std::move(contribs), lvl.map);
  lvl.trace = solve_trace(sys);
  lvl.fields = recover_fields(lvl.locals, lvl.topo, lvl.map, lvl.trace, lvl.law);

  const ReferenceElement eval_ref =
      lagrange_reference(lvl.mesh.cell, cfg.degree, 2 * (cfg.degree + 2) + 5);
  lvl.err_u = l2_error(lvl.mesh, eval_ref, lvl.fields.displacement, 2,
                       [&](const Eigen::Vector2d& x) -> Eigen::VectorXd {
                         return lvl.mc.displacement(x);
                       });
  lvl.err_L = l2_error(lvl.mesh, eval_ref, lvl.fields.mixed, 3,
                       [&](const Eigen::Vector2d& x) -> Eigen::VectorXd {
                         return exact_mixed(lvl.mc, lvl.law, x);
                       });
  return lvl;
}

struct PostprocessErrors {
  double err_ustar = 0.0;
  double mean_residual = 0.0;
  double rotation_residual = 0.0;
};

inline PostprocessErrors postprocess_errors(const LevelSolution& lvl, const StudyConfig& cfg,
                                            RotationalConstraint which) {
  const StarContext ctx = make_star_context(lvl.mesh.cell, cfg.degree);
  const PostprocessResult post =
      postprocess_field(lvl.mesh, lvl.topo, ctx, lvl.law, lvl.fields, lvl.map, lvl.trace,
                        lvl.data, which);
  const ReferenceElement eval_ref =
      lagrange_reference(lvl.mesh.cell, cfg.degree + 1, 2 * (cfg.degree + 3) + 5);
  PostprocessErrors out;
  out.err_ustar = l2_error(lvl.mesh, eval_ref, post.ustar, 2,
                           [&](const Eigen::Vector2d& x) -> Eigen::VectorXd {
                             return lvl.mc.displacement(x);
                           });
  out.mean_residual = post.max_mean_residual;
  out.rotation_residual = post.max_rotation_residual;
  return out;
}

struct ReportRow {
  int n = 0;
  double h = 0.0;
  int ndof_trace = 0;
  double err_u = 0.0, err_L = 0.0, err_ustar = 0.0;
  double eoc_u = 0.0, eoc_L = 0.0, eoc_ustar = 0.0;  // defined from the second row on
  double mean_residual = 0.0, rotation_residual = 0.0;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;

  const ReportRow& last() const { return rows.back(); }
};

inline void fill_eoc(ConvergenceReport& report) {
  for (std::size_t r = 1; r < report.rows.size(); ++r) {
    ReportRow& cur = report.rows[r];
    const ReportRow& prev = report.rows[r - 1];
    const double ratio = std::log(prev.h / cur.h);
    cur.eoc_u = std::log(prev.err_u / cur.err_u) / ratio;
    cur.eoc_L = std::log(prev.err_L / cur.err_L) / ratio;
    cur.eoc_ustar = std::log(prev.err_ustar / cur.err_ustar) / ratio;
  }
}

inline void write_report_csv(const ConvergenceReport& report, const std::string& path) {
  std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw std::runtime_error("write_report_csv: cannot open " + path);
  std::fprintf(f.get(), "n,h,ndof_trace,err_u,err_L,err_ustar,eoc_u,eoc_L,eoc_ustar\n");
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const ReportRow& row = report.rows[r];
    std::fprintf(f.get(), "%d,%.16e,%d,%.16e,%.16e,%.16e", row.n, row.h, row.ndof_trace,
                 row.err_u, row.err_L, row.err_ustar);
    if (r == 0)
      std::fprintf(f.get(), ",,,\n");
    else
      std::fprintf(f.get(), ",%.16e,%.16e,%.16e\n", row.eoc_u, row.eoc_L, row.eoc_ustar);
  }
}

inline ConvergenceReport run_convergence(const StudyConfig& cfg) {
  if (cfg.levels.size() < 2)
    throw std::invalid_argument("run_convergence: at least two refinement levels are required");
  if (cfg.degree < 1 || cfg.degree > 3)
    throw std::invalid_argument("run_convergence: degree must be in 1..3");
  ConvergenceReport report;
  for (int n : cfg.levels) {
    ReportRow row;
    try {
      const LevelSolution lvl = solve_level(cfg, n);
      const PostprocessErrors post = postprocess_errors(lvl, cfg, cfg.constraint);
      row.n = n;
      row.h = lvl.h;
      row.ndof_trace = lvl.map.total_dofs;
      row.err_u = lvl.err_u;
      row.err_L = lvl.err_L;
      row.err_ustar = post.err_ustar;
      row.mean_residual = post.mean_residual;
      row.rotation_residual = post.rotation_residual;
      if (!cfg.vtk_dir.empty()) {
        std::filesystem::create_directories(cfg.vtk_dir);
        write_solution_vtk(lvl.mesh, lvl.ref, lvl.fields, lvl.mc.material,
                           cfg.vtk_dir + "/level_n" + std::to_string(n) + ".vtk");
      }
    } catch (const std::exception& err) {
      std::fprintf(stderr, "level n=%d aborted: %s\n", n, err.what());
      row.n = n;
      row.h = 1.0 / n;
      row.err_u = row.err_L = row.err_ustar = std::nan("");
    }
    report.rows.push_back(row);
  }
  fill_eoc(report);
  if (!cfg.out_csv.empty()) write_report_csv(report, cfg.out_csv);
  return report;
}

struct TauSweepRow {
  double tau = 0.0;
  double err_u = 0.0, err_L = 0.0, err_ustar = 0.0;
};

struct TauSweepReport {
  std::vector<TauSweepRow> rows;

  double argmin_tau_u() const { return argmin(&TauSweepRow::err_u); }
  double argmin_tau_L() const { return argmin(&TauSweepRow::err_L); }

 private:
  double argmin(double TauSweepRow::*field) const {
    double best_tau = rows.front().tau, best = rows.front().*field;
    for (const TauSweepRow& r : rows)
      if (r.*field < best) {
        best = r.*field;
        best_tau = r.tau;
      }
    return best_tau;
  }
};

/// Error versus stabilisation parameter on the first configured level.
inline TauSweepReport run_tau_sweep(const StudyConfig& cfg, const std::vector<double>& taus) {
  if (cfg.levels.empty()) throw std::invalid_argument("run_tau_sweep: a mesh level is required");
  TauSweepReport report;
  for (double tau : taus) {
    StudyConfig one = cfg;
    one.tau = tau;
    one.out_csv.clear();
    one.vtk_dir.clear();
    const LevelSolution lvl = solve_level(one, cfg.levels.front());
    const PostprocessErrors post = postprocess_errors(lvl, one, cfg.constraint);
    report.rows.push_back({tau, lvl.err_u, lvl.err_L, post.err_ustar});
  }
  if (!cfg.out_csv.empty()) {
    std::unique_ptr<std::FILE, detail::FileCloser> f(std::fopen(cfg.out_csv.c_str(), "w"));
    if (!f) throw std::runtime_error("run_tau_sweep: cannot open " + cfg.out_csv);
    std::fprintf(f.get(), "tau,err_u,err_L,err_ustar\n");
    for (const TauSweepRow& r : report.rows)
      std::fprintf(f.get(), "%.16e,%.16e,%.16e,%.16e\n", r.tau, r.err_u, r.err_L, r.err_ustar);
  }
  return report;
}

/// One convergence report per Poisson ratio.
inline std::vector<std::pair<double, ConvergenceReport>> run_nu_sweep(
    const StudyConfig& cfg, const std::vector<double>& nus) {
  std::vector<std::pair<double, ConvergenceReport>> reports;
  for (double nu : nus) {
    StudyConfig one = cfg;
    one.nu = nu;
    if (!cfg.out_csv.empty()) {
      const auto dot = cfg.out_csv.rfind('.');
      const std::string stem = dot == std::string::npos ? cfg.out_csv : cfg.out_csv.substr(0, dot);
      const std::string ext = dot == std::string::npos ? "" : cfg.out_csv.substr(dot);
      char tag[32];
      std::snprintf(tag, sizeof tag, "%g", nu);
      one.out_csv = stem + "_nu" + tag + ext;
    }
    reports.emplace_back(nu, run_convergence(one));
  }
  return reports;
}

}  // namespace hdgv
