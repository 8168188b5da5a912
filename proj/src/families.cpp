#include "qcs/families.hpp"

#include <cmath>

#include "qcs/linalg.hpp"

namespace qcs {

namespace {

void require_square(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw ValidationError("base matrix must be square and nonempty");
}

constexpr double kEigenTol = 1e-9;

// smallest |lambda - target| over the spectrum
double eigen_gap(const Matrix& a, double target) {
  Eigen::VectorXcd ev = eigenvalues(a);
  double gap = kInf;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    gap = std::min(gap, std::abs(ev(i) - std::complex<double>(target, 0.0)));
  return gap;
}

// 0 = no nonzero off-diagonal entry
double min_offdiag_magnitude(const Matrix& a) {
  double best = kInf;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) != 0.0) best = std::min(best, std::abs(a(i, j)));
  return best == kInf ? 0.0 : best;
}

}  // namespace

MatrixFamily desync_family(const Matrix& a) {
  require_square(a);
  const int n = static_cast<int>(a.rows());
  MatrixFamily f;
  f.dimension = n;
  for (int i = 0; i < n; ++i) {
    Matrix m = Matrix::Identity(n, n);
    m.row(i) = a.row(i);
    f.members.push_back(std::move(m));
  }
  return f;
}

MatrixFamily vertex_family(const Matrix& a) {
  require_square(a);
  const int n = static_cast<int>(a.rows());
  MatrixFamily f;
  f.dimension = n;
  for (int i = 0; i < n; ++i) {
    Matrix m = a;
    m.row(i) = -a.row(i);
    f.members.push_back(std::move(m));
  }
  return f;
}

bool irreducible(const Matrix& a) {
  require_square(a);
  const int n = static_cast<int>(a.rows());
  if (n == 1) return true;
  // strong connectivity of the off-diagonal sparsity digraph: everything
  // reachable from node 0 in the graph and in its transpose
  auto reachable_from_zero = [&](bool transpose) {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (v == u || seen[static_cast<size_t>(v)]) continue;
        const double entry = transpose ? a(v, u) : a(u, v);
        if (entry != 0.0) {
          seen[static_cast<size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
    for (bool s : seen)
      if (!s) return false;
    return true;
  };
  return reachable_from_zero(false) && reachable_from_zero(true);
}

BoundReport desync_qcm_bound(const Matrix& a, Norm n) {
  require_square(a);
  if (n != Norm::L1)
    throw NormUnsupported("the desynchronized bound is stated for L1 only");
  const int dim = static_cast<int>(a.rows());
  BoundReport r;
  r.alpha = min_gain(a - Matrix::Identity(dim, dim), Norm::L1) / (2.0 * dim);
  r.beta = 0.5 * min_offdiag_magnitude(a);

  const double gap = eigen_gap(a, 1.0);
  const bool irr = irreducible(a);
  r.applicable = gap > kEigenTol && irr;
  if (gap <= kEigenTol)
    r.reasons.push_back(gap == 0.0 ? "1 is an eigenvalue"
                                   : "near-degenerate: eigenvalue within 1e-9 of 1");
  if (!irr) r.reasons.push_back("A reducible");
  if (dim == 1) {
    r.bound = r.alpha;  // beta^0 = 1, no off-diagonal entries exist
    return r;
  }
  if (r.applicable && r.beta == 0.0)
    throw NumericalFailure(
        "no nonzero off-diagonal entry in an irreducible matrix");
  r.bound = r.alpha * std::pow(r.beta, dim - 1);
  return r;
}

BoundReport vertex_qcm_bound(const Matrix& a, Norm n) {
  require_square(a);
  if (n != Norm::L1)
    throw NormUnsupported("the vertex bound is stated for L1 only");
  const int dim = static_cast<int>(a.rows());
  BoundReport r;
  r.alpha = min_gain(a, Norm::L1) / static_cast<double>(dim);
  r.beta = min_offdiag_magnitude(a);

  const double gap = eigen_gap(a, 0.0);
  const bool irr = irreducible(a);
  r.applicable = gap > kEigenTol && irr;
  if (gap <= kEigenTol)
    r.reasons.push_back(gap == 0.0 ? "0 is an eigenvalue"
                                   : "near-degenerate: eigenvalue within 1e-9 of 0");
  if (!irr) r.reasons.push_back("A reducible");
  if (dim == 1) {
    r.bound = r.alpha;
    return r;
  }
  if (r.applicable && r.beta == 0.0)
    throw NumericalFailure(
        "no nonzero off-diagonal entry in an irreducible matrix");
  r.bound = r.alpha * std::pow(r.beta, dim - 1);
  return r;
}

MatrixFamily counterexample_family(double eps, double delta) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw ValidationError("eps must lie strictly between 0 and 1");
  Matrix m(2, 2);
  m << 1.0 - eps, delta, 0.0, 1.0 - eps;
  MatrixFamily f;
  f.dimension = 2;
  f.members.push_back(std::move(m));
  return f;
}

}  // namespace qcs
