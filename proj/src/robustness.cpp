#include "qcs/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "qcs/reachability.hpp"

namespace qcs {

namespace {

void require_paired(const MatrixFamily& f, const MatrixFamily& g) {
  if (f.dimension != g.dimension)
    throw ValidationError("families must share the dimension");
  if (f.size() != g.size())
    throw ValidationError("families must be index-paired (same member count)");
}

}  // namespace

double family_distance_bound(const MatrixFamily& f, const MatrixFamily& g,
                             int s, Norm n, std::int64_t budget) {
  require_paired(f, g);
  if (s < 1) throw ValidationError("s must be at least 1");
  // walk all words of length <= s on the paired product pair
  struct Node {
    Matrix pf, pg;
  };
  std::vector<Node> frontier{{Matrix::Identity(f.dimension, f.dimension),
                              Matrix::Identity(f.dimension, f.dimension)}};
  double bound = 0.0;
  std::int64_t total = 0;
  for (int t = 1; t <= s; ++t) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      for (int i = 0; i < f.size(); ++i) {
        Node child{f.members[static_cast<size_t>(i)] * node.pf,
                   g.members[static_cast<size_t>(i)] * node.pg};
        bound = std::max(bound, induced_matrix_norm(child.pf - child.pg, n));
        next.push_back(std::move(child));
        if (++total > budget) throw BudgetExceeded("word budget exceeded");
      }
    }
    frontier = std::move(next);
  }
  return bound;
}

double reach_distance_diagnostic(const MatrixFamily& f, const MatrixFamily& g,
                                 const std::vector<Vector>& probes, int s,
                                 Norm n, const Tolerances& tol,
                                 std::int64_t budget) {
  require_paired(f, g);
  double worst = 0.0;
  for (const Vector& x : probes) {
    ReachSet rf = reach_points(f, x, s, n, tol.dedup_tol, budget);
    ReachSet rg = reach_points(g, x, s, n, tol.dedup_tol, budget);
    for (int t = 0; t <= s; ++t) {
      const auto& pf = rf.steps[static_cast<size_t>(t)];
      const auto& pg = rg.steps[static_cast<size_t>(t)];
      // Hausdorff distance between finite point sets
      double directed = 0.0;
      for (const auto& a : pf) {
        double nearest = kInf;
        for (const auto& b : pg)
          nearest = std::min(nearest, vector_norm(a.point - b.point, n));
        directed = std::max(directed, nearest);
      }
      for (const auto& b : pg) {
        double nearest = kInf;
        for (const auto& a : pf)
          nearest = std::min(nearest, vector_norm(a.point - b.point, n));
        directed = std::max(directed, nearest);
      }
      worst = std::max(worst, directed);
    }
  }
  return worst;
}

std::vector<Vector> sphere_probes(int dimension, Norm n, int count) {
  if (count < 1) throw ValidationError("probe count must be positive");
  for (int m = 1;; ++m) {
    std::vector<Vector> grid = sphere_grid(dimension, n, m);
    if (static_cast<int>(grid.size()) >= count || m > 4096) {
      if (static_cast<int>(grid.size()) > count)
        grid.resize(static_cast<size_t>(count));
      return grid;
    }
  }
}

PerturbReport qcm_perturbation_check(const MatrixFamily& f,
                                     const std::vector<Matrix>& deltas,
                                     const SystemSpec& spec, int probe_count) {
  validate_family(f);
  if (deltas.size() != f.members.size())
    throw ValidationError("one delta per family member required");
  MatrixFamily g = f;
  for (size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i].rows() != f.dimension || deltas[i].cols() != f.dimension)
      throw ValidationError("delta shape mismatch");
    g.members[i] += deltas[i];
  }

  const int s = spec.horizon_s;
  PerturbReport report;
  report.rho_s_bound = family_distance_bound(f, g, s, spec.norm);
  report.base_qcm = qcm(f, s, spec.norm, spec.sphere_mesh, spec.tol);
  report.perturbed_qcm = qcm(g, s, spec.norm, spec.sphere_mesh, spec.tol);

  report.lipschitz_ok = true;
  for (const Vector& x : sphere_probes(f.dimension, spec.norm, probe_count)) {
    PerturbReport::PointCheck check;
    check.x = x;
    check.rho_base = qcm_point(f, x, s, spec.norm, spec.tol);
    check.rho_perturbed = qcm_point(g, x, s, spec.norm, spec.tol);
    check.delta = std::abs(check.rho_base - check.rho_perturbed);
    if (check.delta > report.rho_s_bound + 1e-9) report.lipschitz_ok = false;
    report.per_point_checks.push_back(std::move(check));
  }

  if (report.base_qcm.certified_lower > report.rho_s_bound) {
    report.qc_preservation_applicable = true;
    QcVerdict verdict = qc_check(g, spec);
    report.qc_preserved = verdict.status == QcStatus::QuasiControllable;
  }
  return report;
}

}  // namespace qcs
