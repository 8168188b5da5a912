#include "qcs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qcs {

namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau over [structural | slack | artificial] columns plus a RHS
// column, one reduced-cost row per active objective.
struct Tableau {
  Eigen::MatrixXd t;       // rows x (cols + 1), last column is the RHS
  Eigen::RowVectorXd obj;  // phase-2 reduced costs
  Eigen::RowVectorXd aux;  // phase-1 reduced costs, rhs = artificial total
  std::vector<int> basis;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    double f = obj(col);
    if (f != 0.0) obj -= f * t.row(row);
    f = aux(col);
    if (f != 0.0) aux -= f * t.row(row);
    basis[static_cast<size_t>(row)] = col;
  }
};

}  // namespace

LpOutcome solve_lp(const LpProblem& p, double lp_tol) {
  const int dim = static_cast<int>(p.objective.size());
  if (!p.nonneg.empty() && static_cast<int>(p.nonneg.size()) != dim)
    throw ValidationError("nonneg flag count must match the dimension");
  for (const auto& c : p.constraints) {
    if (static_cast<int>(c.row.size()) != dim)
      throw ValidationError("constraint row dimension mismatch");
    if (c.lower > c.upper) throw ValidationError("constraint has lower > upper");
  }

  // Structural columns: one per nonnegative variable, a split pair per
  // free variable. col_var/col_sgn map columns back to variables.
  std::vector<int> col_var;
  std::vector<double> col_sgn;
  for (int j = 0; j < dim; ++j) {
    col_var.push_back(j);
    col_sgn.push_back(1.0);
    if (p.nonneg.empty() || !p.nonneg[static_cast<size_t>(j)]) {
      col_var.push_back(j);
      col_sgn.push_back(-1.0);
    }
  }
  const int ns = static_cast<int>(col_var.size());

  // Rows in standard form: equalities stay single rows (always carrying an
  // artificial), interval sides become <= rows with slacks.
  struct Row {
    const Vector* a;
    double sgn;    // orientation applied to the constraint row
    double rhs;    // after orientation, then possibly negated to >= 0
    bool eq;
  };
  std::vector<Row> rows;
  for (const auto& c : p.constraints) {
    if (c.lower == c.upper) {
      rows.push_back({&c.row, 1.0, c.upper, true});
      continue;
    }
    if (c.upper < kInf) rows.push_back({&c.row, 1.0, c.upper, false});
    if (c.lower > -kInf) rows.push_back({&c.row, -1.0, -c.lower, false});
  }
  const int m = static_cast<int>(rows.size());

  int n_slack = 0, n_art = 0;
  for (const Row& r : rows) {
    if (r.eq) {
      ++n_art;
    } else {
      ++n_slack;
      if (r.rhs < 0.0) ++n_art;
    }
  }
  const int ncols = ns + n_slack + n_art;
  const int first_art = ns + n_slack;

  Tableau tb;
  tb.t.setZero(m, ncols + 1);
  tb.obj.setZero(ncols + 1);
  tb.aux.setZero(ncols + 1);
  tb.basis.resize(static_cast<size_t>(m));

  int slack = ns, art = first_art;
  for (int i = 0; i < m; ++i) {
    const Row& r = rows[static_cast<size_t>(i)];
    double flip = (r.eq && r.rhs < 0.0) || (!r.eq && r.rhs < 0.0) ? -1.0 : 1.0;
    for (int c = 0; c < ns; ++c)
      tb.t(i, c) = flip * r.sgn * col_sgn[static_cast<size_t>(c)] *
                   (*r.a)(col_var[static_cast<size_t>(c)]);
    tb.t(i, ncols) = flip * r.rhs;
    if (r.eq) {
      tb.t(i, art) = 1.0;
      tb.basis[static_cast<size_t>(i)] = art++;
      tb.aux += tb.t.row(i);
    } else {
      tb.t(i, slack) = flip;
      if (flip < 0.0) {
        tb.t(i, art) = 1.0;
        tb.basis[static_cast<size_t>(i)] = art++;
        tb.aux += tb.t.row(i);
      } else {
        tb.basis[static_cast<size_t>(i)] = slack;
      }
      ++slack;
    }
  }
  for (int c = 0; c < ns; ++c)
    tb.obj(c) = col_sgn[static_cast<size_t>(c)] *
                p.objective(col_var[static_cast<size_t>(c)]);
  for (int c = first_art; c < ncols; ++c) tb.aux(c) -= 1.0;

  const long cap = 50L * (static_cast<long>(p.constraints.size()) + dim) + 50L;

  auto run_phase = [&](const Eigen::RowVectorXd& costs, bool ban_artificials,
                       bool* unbounded) -> bool {
    *unbounded = false;
    const int limit = ban_artificials ? first_art : ncols;
    for (long iter = 0; iter < cap; ++iter) {
      // Bland: entering column = smallest index with positive reduced cost.
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (costs(j) > lp_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        const double a = tb.t(i, enter);
        if (a > kPivotTol) {
          const double ratio = tb.t(i, ncols) / a;
          if (ratio < best_ratio - 1e-15 ||
              (leave >= 0 && std::abs(ratio - best_ratio) <= 1e-15 &&
               tb.basis[static_cast<size_t>(i)] <
                   tb.basis[static_cast<size_t>(leave)])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        *unbounded = true;
        return true;
      }
      tb.pivot(leave, enter);
    }
    return false;
  };

  bool unbounded = false;
  if (n_art > 0) {
    if (!run_phase(tb.aux, false, &unbounded))
      throw NumericalFailure("simplex phase 1 exceeded its pivot cap");
    if (unbounded) throw NumericalFailure("simplex phase 1 lost boundedness");
    double scale = 1.0;
    for (const Row& r : rows) scale = std::max(scale, std::abs(r.rhs));
    // aux rhs tracks the artificial-variable total, zero iff feasible.
    if (tb.aux(ncols) > lp_tol * scale)
      return {LpStatus::Infeasible, 0.0, Vector()};
    // Pivot leftover artificials out of the basis so they cannot drift
    // positive during phase 2; a row with no non-artificial pivot is
    // redundant and stays inert.
    for (int i = 0; i < m; ++i) {
      if (tb.basis[static_cast<size_t>(i)] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tb.t(i, j)) > kPivotTol) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }
  if (!run_phase(tb.obj, true, &unbounded))
    throw NumericalFailure("simplex phase 2 exceeded its pivot cap");
  if (unbounded) return {LpStatus::Unbounded, 0.0, Vector()};

  Vector x = Vector::Zero(dim);
  for (int i = 0; i < m; ++i) {
    const int b = tb.basis[static_cast<size_t>(i)];
    if (b < ns)
      x(col_var[static_cast<size_t>(b)]) +=
          col_sgn[static_cast<size_t>(b)] * tb.t(i, ncols);
  }
  return {LpStatus::Optimal, p.objective.dot(x), x};
}

double min_gain(const Matrix& m, Norm n, double rank_tol) {
  const double max_entry = m.cwiseAbs().maxCoeff();
  if (max_entry == 0.0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const double sigma_min = svd.singularValues().minCoeff();
  if (sigma_min < rank_tol * max_entry) return 0.0;
  const Matrix inv = m.partialPivLu().inverse();
  return 1.0 / induced_matrix_norm(inv, n);
}

Eigen::VectorXcd eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigensolve did not converge");
  return es.eigenvalues();
}

double spectral_radius(const Matrix& m) {
  return eigenvalues(m).cwiseAbs().maxCoeff();
}

}  // namespace qcs
