#pragma once

#include <optional>

#include "qcs/classify.hpp"
#include "qcs/model.hpp"
#include "qcs/reachability.hpp"

namespace qcs {

/// Bracketed estimate of the s-measure of quasi-controllability.
/// certified_lower = max(0, grid minimum - lipschitz_M * covering_radius)
/// is a sound lower bound on qcm_s; the grid minimum (empirical_inf) is an
/// upper estimate. The true qcm_s lies between them.
struct QcmEstimate {
  int s = 0;
  double certified_lower = 0.0;
  double empirical_inf = 0.0;
  Vector argmin_point;
  double mesh = 0.0;           // effective pitch 1/m
  double lipschitz_M = 1.0;    // max induced product norm over lengths <= s
  double covering_radius = 0.0;
  std::int64_t grid_size = 0;
};

/// Inscribed-ball radius of the orbit polytope absco{reach points, t <= s}
/// at a unit starting point (||x|| = 1 within 1e-12 in the active norm).
double qcm_point(const MatrixFamily& f, const Vector& x, int s, Norm n,
                 const Tolerances& tol,
                 std::int64_t budget = kDefaultPointBudget);

/// Deterministic sign-closed sphere grid of pitch 1/m, canonical order.
/// Antipodal points share their measure value, so one of each pair is
/// enumerated.
std::vector<Vector> sphere_grid(int dimension, Norm n, int m,
                                std::int64_t budget = kDefaultPointBudget);

/// Covering radius of the full sphere grid of pitch 1/m: N/(2m) for the L1
/// sphere, 1/(2m) for the Linf sphere (verified against brute force in the
/// tests).
double sphere_covering_radius(int dimension, Norm n, int m);

QcmEstimate qcm(const MatrixFamily& f, int s, Norm n, double mesh,
                const Tolerances& tol,
                std::int64_t budget = kDefaultPointBudget);

/// Empirical overshooting measure: exact max of induced product norms over
/// lengths 0..horizon (identity included, so always >= 1), with the first
/// witness in canonical order. Branch-and-bound pruning never discards a
/// subtree that could exceed the running maximum.
struct OvmEstimate {
  int horizon = 0;
  double lower_bound = 1.0;
  Word witness_word;
  int witness_t = 0;
  std::optional<double> certified_upper;
  /// Max induced norm per product length with the first word attaining it;
  /// exact for every length when exact_profile was requested, otherwise
  /// exact only up to the first pruned level.
  std::vector<double> level_max;
  std::vector<Word> level_witness;
  bool profile_exact = false;
};

OvmEstimate ovm_empirical(const MatrixFamily& f, int horizon, Norm n,
                          const Tolerances& tol, bool exact_profile = false,
                          std::int64_t budget = kDefaultPointBudget);

/// Theorem-backed a-priori transient bound: when the family carries a
/// stability certificate and a positive certified qcm lower bound,
/// every trajectory from the unit ball stays within 1/qcm_lower.
struct TransientBound {
  double qcm_lower = 0.0;
  double bound = 0.0;
  Verdict certificate;
  QcmEstimate measure;
};

/// Throws NotApplicable when classify() does not certify stability and
/// DegenerateMeasure when the certified lower bound is zero.
TransientBound transient_bound(const MatrixFamily& f, const SystemSpec& spec);

}  // namespace qcs
