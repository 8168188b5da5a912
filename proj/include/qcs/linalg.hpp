#pragma once

#include <limits>
#include <vector>

#include "qcs/model.hpp"

namespace qcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Maximize <objective, c> subject to interval constraints
/// lower <= <row, c> <= upper. Variables are free by default; entries of
/// `nonneg` flag variables restricted to c_j >= 0 (empty = all free).
struct LpProblem {
  Vector objective;
  struct Constraint {
    Vector row;
    double lower = -kInf;
    double upper = kInf;
  };
  std::vector<Constraint> constraints;
  std::vector<bool> nonneg;

  void add(const Vector& row, double lower, double upper) {
    constraints.push_back({row, lower, upper});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vector point;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Deterministic for identical input. Throws NumericalFailure if no status
/// can be certified within 50 * (constraints + dimension) pivots per phase.
LpOutcome solve_lp(const LpProblem& p, double lp_tol);

/// min_{||x||=1} ||Mx|| in the given norm: 0 when M is singular at
/// rank_tol (relative to the largest entry magnitude), otherwise exactly
/// 1 / induced_matrix_norm(M^-1).
double min_gain(const Matrix& m, Norm n, double rank_tol = 1e-9);

/// Largest eigenvalue modulus. Throws NumericalFailure if the eigensolve
/// does not converge.
double spectral_radius(const Matrix& m);

/// All eigenvalues of m (convergence-checked).
Eigen::VectorXcd eigenvalues(const Matrix& m);

}  // namespace qcs
