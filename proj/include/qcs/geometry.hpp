#pragma once

#include <vector>

#include "qcs/linalg.hpp"
#include "qcs/model.hpp"

namespace qcs {

/// A symmetric polytope absco(W) = co(W u -W), stored by its generators W.
/// Generators are taken as given; callers deduplicate beforehand.
struct SymPolytope {
  int dimension = 0;
  std::vector<Vector> generators;
};

/// Rank of the matrix whose columns are the given points; singular values
/// below rank_tol * (largest singular value) count as zero.
int span_dim(const std::vector<Vector>& points, double rank_tol);

/// Largest rho with the norm ball S(rho) inside absco(generators).
/// Computed through the polar polytope {c : |<c,w>| <= 1 for all w}:
/// rho = 1 / max dual-norm over the polar. For the L1 primal the dual max
/// splits into 2N coordinate LPs; for the Linf primal it enumerates all
/// 2^N sign objectives (N <= 10 enforced, DimensionCap beyond).
/// Returns 0 when the generators do not span.
double inscribed_radius(const SymPolytope& p, Norm n, double lp_tol = 1e-10,
                        double rank_tol = 1e-9);

/// min ||x - y|| over y in absco(generators), as a single LP over hull
/// weights and distance epigraph variables.
double point_distance(const Vector& x, const SymPolytope& p, Norm n,
                      double lp_tol = 1e-10);

/// Hausdorff distance between two symmetric polytopes; exact because the
/// directed distance from a hull is attained at a generator.
double hausdorff(const SymPolytope& p, const SymPolytope& q, Norm n,
                 double lp_tol = 1e-10);

}  // namespace qcs
