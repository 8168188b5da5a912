#pragma once

#include <string>
#include <vector>

#include "qcs/model.hpp"

namespace qcs {

/// Analytic quasi-controllability lower bound for a constructed family.
/// bound = alpha * beta^(N-1) exactly when applicable; `reasons` lists why
/// the bound does not apply otherwise.
struct BoundReport {
  double alpha = 0.0;
  double beta = 0.0;
  double bound = 0.0;
  bool applicable = false;
  std::vector<std::string> reasons;
};

/// Desynchronized family {A_1, ..., A_N}: A_i is the identity with row i
/// replaced by row i of A. Models component-wise asynchronous updates.
MatrixFamily desync_family(const Matrix& a);

/// Vertex family {D_1 A, ..., D_N A} with D_i = diag(1, ..., -1, ..., 1),
/// the -1 in slot i (row i of A negated).
MatrixFamily vertex_family(const Matrix& a);

/// True iff the off-diagonal sparsity digraph (edge i->j when a_ij != 0,
/// i != j) is strongly connected; equivalently A cannot be permuted to
/// block-triangular form.
bool irreducible(const Matrix& a);

/// alpha = (1/2N) min_gain(A - I), beta = (1/2) min nonzero off-diagonal
/// magnitude; applicable iff 1 is not an eigenvalue of A (within 1e-9) and
/// A is irreducible. L1 norm only.
BoundReport desync_qcm_bound(const Matrix& a, Norm n = Norm::L1);

/// alpha~ = (1/N) min_gain(A), beta~ = min nonzero off-diagonal magnitude;
/// applicable iff A is nonsingular (no eigenvalue within 1e-9 of 0) and
/// irreducible. L1 norm only.
BoundReport vertex_qcm_bound(const Matrix& a, Norm n = Norm::L1);

/// Single-member family {[[1-eps, delta],[0, 1-eps]]}: stable for any
/// 0 < eps < 1 but never quasi-controllable, with transient peaks growing
/// as delta/eps does.
MatrixFamily counterexample_family(double eps, double delta);

}  // namespace qcs
