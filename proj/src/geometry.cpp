#include "qcs/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace qcs {

int span_dim(const std::vector<Vector>& points, double rank_tol) {
  if (points.empty()) return 0;
  Matrix a(points[0].size(), static_cast<Eigen::Index>(points.size()));
  for (size_t j = 0; j < points.size(); ++j)
    a.col(static_cast<Eigen::Index>(j)) = points[j];
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  return rank;
}

namespace {

// max{<sigma, c> : |<c, w>| <= 1 for all generators w}, solved in its dual
// form min{||lambda||_1 : sum lambda_i w_i = sigma} whose tableau has only
// N equality rows. The optima coincide by LP duality.
double polar_support(const SymPolytope& p, const Vector& sigma, double lp_tol) {
  const int g = static_cast<int>(p.generators.size());
  const int dim = p.dimension;
  LpProblem lp;
  lp.objective = Vector::Constant(2 * g, -1.0);
  lp.nonneg.assign(static_cast<size_t>(2 * g), true);
  for (int j = 0; j < dim; ++j) {
    Vector row(2 * g);
    for (int i = 0; i < g; ++i) {
      row(i) = p.generators[static_cast<size_t>(i)](j);
      row(g + i) = -row(i);
    }
    lp.add(row, sigma(j), sigma(j));
  }
  LpOutcome out = solve_lp(lp, lp_tol);
  if (out.status == LpStatus::Infeasible) return kInf;  // sigma outside span
  if (out.status != LpStatus::Optimal)
    throw NumericalFailure("polar support LP did not reach an optimum");
  return -out.value;
}

// max over the polar polytope of the dual norm, one LP per extreme
// objective direction of the dual-norm unit ball. Negated directions share
// the value by symmetry of the polar and are skipped.
double polar_dual_norm_max(const SymPolytope& p, Norm primal, double lp_tol) {
  const int n = p.dimension;
  double best = 0.0;
  if (primal == Norm::L1) {
    // dual norm Linf: maximize +-c_j
    for (int j = 0; j < n; ++j)
      best = std::max(best, polar_support(p, Vector::Unit(n, j), lp_tol));
  } else {
    // dual norm L1: the maximum over the polytope is attained at a vertex,
    // so sweep all sign objectives.
    if (n > 10) throw DimensionCap("Linf inscribed radius is capped at N <= 10");
    const unsigned half = n == 1 ? 1u : 1u << (n - 1);
    for (unsigned mask = 0; mask < half; ++mask) {
      Vector obj(n);
      obj(0) = 1.0;
      for (int j = 1; j < n; ++j) obj(j) = (mask >> (j - 1)) & 1u ? -1.0 : 1.0;
      best = std::max(best, polar_support(p, obj, lp_tol));
    }
  }
  return best;
}

}  // namespace

double inscribed_radius(const SymPolytope& p, Norm n, double lp_tol,
                        double rank_tol) {
  if (p.generators.empty()) return 0.0;
  if (span_dim(p.generators, rank_tol) < p.dimension) return 0.0;
  const double m = polar_dual_norm_max(p, n, lp_tol);
  if (m == kInf) return 0.0;  // polar unbounded: degenerate span direction
  if (!(m > 0.0)) throw NumericalFailure("polar maximization collapsed to zero");
  return 1.0 / m;
}

double point_distance(const Vector& x, const SymPolytope& p, Norm n,
                      double lp_tol) {
  const int g = static_cast<int>(p.generators.size());
  const int dim = p.dimension;
  const int naux = n == Norm::L1 ? dim : 1;
  const int nv = 2 * g + naux;  // lambda, s, epigraph vars

  auto unit = [&](int idx) {
    Vector v = Vector::Zero(nv);
    v(idx) = 1.0;
    return v;
  };

  LpProblem lp;
  lp.objective = Vector::Zero(nv);
  for (int j = 0; j < naux; ++j) lp.objective(2 * g + j) = -1.0;

  // s_i >= |lambda_i|, sum s_i <= 1
  Vector total = Vector::Zero(nv);
  for (int i = 0; i < g; ++i) {
    Vector r = unit(g + i);
    r(i) = -1.0;
    lp.add(r, 0.0, kInf);  // s_i - lambda_i >= 0
    r(i) = 1.0;
    lp.add(r, 0.0, kInf);  // s_i + lambda_i >= 0
    total(g + i) = 1.0;
  }
  lp.add(total, -kInf, 1.0);

  // epigraph of the distance to y = sum lambda_i w_i
  for (int j = 0; j < dim; ++j) {
    Vector r = Vector::Zero(nv);
    for (int i = 0; i < g; ++i) r(i) = p.generators[static_cast<size_t>(i)](j);
    r(2 * g + (n == Norm::L1 ? j : 0)) = 1.0;
    lp.add(r, x(j), kInf);  // u + <w_col_j, lambda> >= x_j
    for (int i = 0; i < g; ++i) r(i) = -r(i);
    lp.add(r, -x(j), kInf);  // u - <w_col_j, lambda> >= -x_j
  }

  LpOutcome out = solve_lp(lp, lp_tol);
  if (out.status != LpStatus::Optimal)
    throw NumericalFailure("distance LP did not reach an optimum");
  return std::max(0.0, -out.value);
}

double hausdorff(const SymPolytope& p, const SymPolytope& q, Norm n,
                 double lp_tol) {
  double d = 0.0;
  for (const Vector& w : p.generators) d = std::max(d, point_distance(w, q, n, lp_tol));
  for (const Vector& w : q.generators) d = std::max(d, point_distance(w, p, n, lp_tol));
  return d;
}

}  // namespace qcs
