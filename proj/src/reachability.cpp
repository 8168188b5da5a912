#include "qcs/reachability.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qcs/dedup.hpp"
#include "qcs/geometry.hpp"
#include "qcs/measures.hpp"

namespace qcs {

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << '.';
    os << w[i];
  }
  return os.str();
}

const char* qc_status_name(QcStatus s) {
  switch (s) {
    case QcStatus::QuasiControllable: return "quasi_controllable";
    case QcStatus::NotQuasiControllable: return "not_quasi_controllable";
    default: return "unknown";
  }
}

std::vector<Vector> ReachSet::all_points() const {
  std::vector<Vector> pts;
  for (const auto& level : steps)
    for (const auto& e : level) pts.push_back(e.point);
  return pts;
}

ReachSet reach_points(const MatrixFamily& f, const Vector& x, int s, Norm n,
                      double dedup_tol, std::int64_t budget) {
  if (x.size() != f.dimension)
    throw ValidationError("start point dimension mismatch");
  if (s < 0) throw ValidationError("horizon must be nonnegative");

  ReachSet rs;
  rs.base_point = x;
  rs.dedup_tol = dedup_tol;
  rs.steps.push_back({{x, {}}});
  std::int64_t total = 1;

  const auto dist = [n](const Vector& a, const Vector& b) {
    return vector_norm(a - b, n);
  };
  for (int t = 1; t <= s; ++t) {
    std::vector<ReachSet::Entry> level;
    DedupIndex idx(dedup_tol);
    for (const auto& parent : rs.steps.back()) {
      for (int i = 0; i < f.size(); ++i) {
        Vector p = f.members[static_cast<size_t>(i)] * parent.point;
        if (!idx.insert_if_new(p, dedup_tol, dist)) continue;
        Word w = parent.word;
        w.push_back(i);
        level.push_back({std::move(p), std::move(w)});
        if (++total > budget)
          throw BudgetExceeded("reachable-point budget exceeded");
      }
    }
    rs.steps.push_back(std::move(level));
  }
  return rs;
}

int orbit_span_dim(const MatrixFamily& f, const Vector& x, int s, Norm n,
                   double rank_tol, double dedup_tol, std::int64_t budget) {
  ReachSet rs = reach_points(f, x, s, n, dedup_tol, budget);
  return span_dim(rs.all_points(), rank_tol);
}

ProductSet enumerate_products(const MatrixFamily& f, int depth, Norm n,
                              double dedup_tol,
                              std::optional<double> prune_bound,
                              std::int64_t budget) {
  if (depth < 1) throw ValidationError("product depth must be at least 1");
  ProductSet ps;
  ps.depth = depth;
  const auto dist = [](const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
  };

  std::int64_t total = 0;
  std::vector<ProductSet::Entry> parents;
  {
    ProductSet::Entry root;
    root.product = Matrix::Identity(f.dimension, f.dimension);
    root.norm = 1.0;
    parents.push_back(std::move(root));
  }
  for (int t = 1; t <= depth; ++t) {
    std::vector<ProductSet::Entry> level;
    DedupIndex idx(dedup_tol);
    for (const auto& parent : parents) {
      if (prune_bound && parent.norm < *prune_bound && t > 1) continue;
      for (int i = 0; i < f.size(); ++i) {
        Matrix m = f.members[static_cast<size_t>(i)] * parent.product;
        if (!idx.insert_if_new(flatten_matrix(m), dedup_tol, dist)) continue;
        ProductSet::Entry e;
        e.word = parent.word;
        e.word.push_back(i);
        e.norm = induced_matrix_norm(m, n);
        e.product = std::move(m);
        level.push_back(std::move(e));
        if (++total > budget) throw BudgetExceeded("product budget exceeded");
      }
    }
    ps.levels.push_back(level);
    parents = std::move(level);
  }
  return ps;
}

namespace {

// Orthonormal basis of null(m - lambda I), loose threshold: used for
// candidate generation only, every candidate gets re-verified.
Matrix eigenspace_basis(const Matrix& m, double lambda, double null_tol) {
  const Eigen::Index n = m.rows();
  Matrix shifted = m - lambda * Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= null_tol) ++null_dim;
  if (null_dim == 0) return Matrix(n, 0);
  return svd.matrixV().rightCols(null_dim);
}

std::vector<Matrix> real_eigenspaces(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigensolve did not converge");
  std::vector<double> reals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) <= 1e-7 * scale) reals.push_back(ev.real());
  }
  std::sort(reals.begin(), reals.end());
  std::vector<Matrix> spaces;
  size_t i = 0;
  while (i < reals.size()) {
    size_t j = i;
    while (j + 1 < reals.size() && reals[j + 1] - reals[j] <= 1e-7 * scale) ++j;
    double rep = 0.0;
    for (size_t u = i; u <= j; ++u) rep += reals[u];
    rep /= static_cast<double>(j - i + 1);
    Matrix basis = eigenspace_basis(m, rep, 1e-6 * scale);
    if (basis.cols() > 0) spaces.push_back(std::move(basis));
    i = j + 1;
  }
  return spaces;
}

// Orthonormal basis of span(a) intersected with span(b).
Matrix intersect_subspaces(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() == 0 || b.cols() == 0) return Matrix(n, 0);
  if (a.cols() == n) return b;
  if (b.cols() == n) return a;
  Matrix c(n, a.cols() + b.cols());
  c << a, -b;
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Vector> vecs;
  for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i) {
    const double sigma = i < sv.size() ? sv(i) : 0.0;
    if (sigma <= 1e-8) {
      Vector u = svd.matrixV().col(i).head(a.cols());
      vecs.push_back(a * u);
    }
  }
  if (vecs.empty()) return Matrix(n, 0);
  Matrix stacked(n, static_cast<Eigen::Index>(vecs.size()));
  for (size_t k = 0; k < vecs.size(); ++k)
    stacked.col(static_cast<Eigen::Index>(k)) = vecs[k];
  Eigen::JacobiSVD<Matrix> orth(stacked, Eigen::ComputeThinU);
  const auto& osv = orth.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < osv.size(); ++i)
    if (osv(i) > 1e-10 * std::max(1.0, osv(0))) ++rank;
  if (rank == 0) return Matrix(n, 0);
  return orth.matrixU().leftCols(rank);
}

// Candidate common eigenvectors as intersections of per-member real
// eigenspaces, trying all eigenvalue selections.
std::vector<Vector> common_eigvec_candidates(const std::vector<Matrix>& members) {
  constexpr size_t kSpaceCap = 64;
  std::vector<Matrix> live = real_eigenspaces(members[0]);
  for (size_t j = 1; j < members.size() && !live.empty(); ++j) {
    std::vector<Matrix> spaces = real_eigenspaces(members[j]);
    std::vector<Matrix> next;
    for (const Matrix& s : live) {
      for (const Matrix& e : spaces) {
        Matrix t = intersect_subspaces(s, e);
        if (t.cols() > 0) next.push_back(std::move(t));
        if (next.size() >= kSpaceCap) break;
      }
      if (next.size() >= kSpaceCap) break;
    }
    live = std::move(next);
  }
  std::vector<Vector> out;
  for (const Matrix& t : live)
    for (Eigen::Index c = 0; c < t.cols(); ++c) out.push_back(t.col(c));
  return out;
}

bool invariant_line_ok(const std::vector<Matrix>& members, const Vector& v,
                       double tol) {
  const double vv = v.squaredNorm();
  if (!(vv > 0.0)) return false;
  for (const Matrix& a : members) {
    Vector w = a * v;
    Vector r = w - (v.dot(w) / vv) * v;
    if (r.norm() > tol * (1.0 + w.norm())) return false;
  }
  return true;
}

Matrix orthonormalize_columns(const std::vector<Vector>& vecs, double rank_tol) {
  Matrix stacked(vecs[0].size(), static_cast<Eigen::Index>(vecs.size()));
  for (size_t k = 0; k < vecs.size(); ++k)
    stacked.col(static_cast<Eigen::Index>(k)) = vecs[k];
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Matrix(vecs[0].size(), 0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

std::vector<Vector> basis_columns(const Matrix& b) {
  std::vector<Vector> cols;
  for (Eigen::Index c = 0; c < b.cols(); ++c) cols.push_back(b.col(c));
  return cols;
}

}  // namespace

bool invariant_subspace_ok(const MatrixFamily& f,
                           const std::vector<Vector>& basis, double tol) {
  if (basis.empty()) return false;
  Matrix b = orthonormalize_columns(basis, 1e-12);
  if (b.cols() == 0) return false;
  for (const Matrix& a : f.members) {
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      Vector w = a * b.col(c);
      Vector r = w - b * (b.transpose() * w);
      if (r.norm() > tol * (1.0 + w.norm())) return false;
    }
  }
  return true;
}

QcVerdict qc_check(const MatrixFamily& f, const SystemSpec& spec) {
  validate_family(f);
  const int n = f.dimension;
  const double vtol = std::max(spec.tol.rank_tol, 1e-10);

  QcVerdict verdict;
  if (n == 1) {
    verdict.status = QcStatus::QuasiControllable;
    verdict.evidence = "dimension 1: no nonzero proper subspace exists";
    return verdict;
  }

  // Stage 1a: common invariant line via eigenspace intersections.
  std::vector<Vector> line_candidates = common_eigvec_candidates(f.members);
  for (const Vector& v : line_candidates) {
    if (!invariant_line_ok(f.members, v, vtol)) continue;
    verdict.status = QcStatus::NotQuasiControllable;
    verdict.witness_basis = {v.normalized()};
    verdict.evidence = "common eigenvector (invariant line)";
    return verdict;
  }

  // Stage 1b: common invariant hyperplane = common eigenvector of the
  // transposes; the witness subspace is its orthogonal complement.
  std::vector<Matrix> transposes;
  for (const Matrix& a : f.members) transposes.push_back(a.transpose());
  std::vector<Vector> normal_candidates = common_eigvec_candidates(transposes);
  for (const Vector& c : normal_candidates) {
    if (!invariant_line_ok(transposes, c, vtol)) continue;
    Eigen::FullPivHouseholderQR<Matrix> qr(c);
    Matrix q = qr.matrixQ();
    std::vector<Vector> basis;
    for (Eigen::Index j = 1; j < q.cols(); ++j) basis.push_back(q.col(j));
    if (!invariant_subspace_ok(f, basis, vtol)) continue;
    verdict.status = QcStatus::NotQuasiControllable;
    verdict.witness_basis = basis;
    verdict.evidence = "common invariant hyperplane (transpose eigenvector)";
    return verdict;
  }

  // Stage 2: orbit-span probes. A deficient orbit span over s >= N-1 steps
  // is itself an invariant subspace containing the probe.
  const int s_eff = std::max(spec.horizon_s, n - 1);
  std::vector<Vector> probes;
  for (int j = 0; j < n; ++j) probes.push_back(Vector::Unit(n, j));
  for (const Matrix& a : f.members)
    for (const Matrix& space : real_eigenspaces(a))
      for (Eigen::Index c = 0; c < space.cols(); ++c) probes.push_back(space.col(c));
  for (const Vector& v : line_candidates) probes.push_back(v);
  for (const Vector& v : normal_candidates) probes.push_back(v);
  {
    std::mt19937_64 rng(0x51C9A11DULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < 20; ++r) {
      Vector v(n);
      for (int j = 0; j < n; ++j) v(j) = gauss(rng);
      probes.push_back(v);
    }
  }
  for (const Vector& raw : probes) {
    const double len = vector_norm(raw, spec.norm);
    if (!(len > 1e-12)) continue;
    Vector x = raw / len;
    ReachSet rs = reach_points(f, x, s_eff, spec.norm, spec.tol.dedup_tol);
    std::vector<Vector> pts = rs.all_points();
    if (span_dim(pts, spec.tol.rank_tol) >= n) continue;
    Matrix basis = orthonormalize_columns(pts, spec.tol.rank_tol);
    std::vector<Vector> cols = basis_columns(basis);
    if (cols.empty() || !invariant_subspace_ok(f, cols, vtol)) continue;
    verdict.status = QcStatus::NotQuasiControllable;
    verdict.witness_basis = cols;
    verdict.evidence = "deficient orbit span from probe";
    return verdict;
  }

  // Stage 3: for N <= 3 the subspace search above covers every proper
  // dimension, so no witness means quasi-controllable. Higher dimensions
  // need the certified measure to conclude.
  if (n <= 3) {
    verdict.status = QcStatus::QuasiControllable;
    verdict.evidence =
        "exhaustive invariant-subspace search (dims 1 and N-1) and "
        "full-span probes";
    return verdict;
  }
  QcmEstimate est = qcm(f, spec.horizon_s, spec.norm, spec.sphere_mesh, spec.tol);
  if (est.certified_lower > 0.0) {
    verdict.status = QcStatus::QuasiControllable;
    verdict.certified_qcm_lower = est.certified_lower;
    verdict.evidence = "certified positive quasi-controllability measure";
    return verdict;
  }
  verdict.status = QcStatus::Unknown;
  verdict.evidence =
      "no invariant subspace found in dims {1, N-1}; intermediate dimensions "
      "not decided and certified measure bound is zero";
  return verdict;
}

}  // namespace qcs
