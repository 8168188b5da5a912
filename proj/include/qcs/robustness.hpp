#pragma once

#include <vector>

#include "qcs/measures.hpp"
#include "qcs/model.hpp"

namespace qcs {

/// Per-point comparison of the measure under a perturbation.
struct PerturbReport {
  QcmEstimate base_qcm;
  QcmEstimate perturbed_qcm;
  double rho_s_bound = 0.0;
  bool lipschitz_ok = false;
  struct PointCheck {
    Vector x;
    double rho_base = 0.0;
    double rho_perturbed = 0.0;
    double delta = 0.0;
  };
  std::vector<PointCheck> per_point_checks;
  /// Set when base certified_lower > rho_s_bound: quasi-controllability is
  /// then guaranteed to survive the perturbation; records whether the
  /// decision procedure agreed.
  bool qc_preservation_applicable = false;
  bool qc_preserved = false;
};

/// Certified upper bound on the reach-set distance rho_s between two
/// index-paired families: max over words of length <= s of the induced
/// norm of the product difference. Every reach point of g from the unit
/// ball lies within this distance of the corresponding reach point of f.
double family_distance_bound(const MatrixFamily& f, const MatrixFamily& g,
                             int s, Norm n,
                             std::int64_t budget = kDefaultPointBudget);

/// Diagnostic: exact Hausdorff distance between the raw reach point sets of
/// the two families, maximized over the probe points and t <= s. Finite
/// point sets, no hulls.
double reach_distance_diagnostic(const MatrixFamily& f, const MatrixFamily& g,
                                 const std::vector<Vector>& probes, int s,
                                 Norm n, const Tolerances& tol,
                                 std::int64_t budget = kDefaultPointBudget);

/// Evaluate the measure at deterministic sphere probes for both the family
/// and its perturbation, check the per-point Lipschitz inequality
/// |rho_f(x) - rho_g(x)| <= rho_s_bound, and test preservation of
/// quasi-controllability when the certified margin covers the perturbation.
PerturbReport qcm_perturbation_check(const MatrixFamily& f,
                                     const std::vector<Matrix>& deltas,
                                     const SystemSpec& spec, int probe_count);

/// The deterministic probe sequence used by qcm_perturbation_check: the
/// coarsest canonical sphere grid with at least `count` points, truncated.
std::vector<Vector> sphere_probes(int dimension, Norm n, int count);

}  // namespace qcs
