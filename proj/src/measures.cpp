#include "qcs/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include "qcs/dedup.hpp"
#include "qcs/geometry.hpp"

namespace qcs {

namespace {

// ANALYZER_THREADS overrides the worker count for independent grid
// evaluations; reductions always run in canonical grid order, so the
// result does not depend on it.
int worker_count() {
  if (const char* env = std::getenv("ANALYZER_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 64);
  }
  return 1;
}

}  // namespace

double qcm_point(const MatrixFamily& f, const Vector& x, int s, Norm n,
                 const Tolerances& tol, std::int64_t budget) {
  if (std::abs(vector_norm(x, n) - 1.0) > 1e-12)
    throw ValidationError("qcm_point expects a unit starting vector");
  if (s < f.dimension - 1)
    throw ValidationError("qcm horizon must be at least N-1");
  ReachSet rs = reach_points(f, x, s, n, tol.dedup_tol, budget);
  SymPolytope p{f.dimension, rs.all_points()};
  return inscribed_radius(p, n, tol.lp_tol, tol.rank_tol);
}

namespace {

void l1_compositions(int dim, int m, std::vector<std::vector<int>>& out) {
  std::vector<int> comp(static_cast<size_t>(dim), 0);
  std::function<void(int, int)> rec = [&](int pos, int rest) {
    if (pos == dim - 1) {
      comp[static_cast<size_t>(pos)] = rest;
      out.push_back(comp);
      return;
    }
    for (int a = 0; a <= rest; ++a) {
      comp[static_cast<size_t>(pos)] = a;
      rec(pos + 1, rest - a);
    }
  };
  rec(0, m);
}

}  // namespace

std::vector<Vector> sphere_grid(int dimension, Norm n, int m,
                                std::int64_t budget) {
  if (m < 1) throw ValidationError("sphere mesh must give at least one cell");
  std::vector<Vector> grid;
  const double step = 1.0 / static_cast<double>(m);
  const auto push = [&](Vector&& x) {
    grid.push_back(std::move(x));
    if (static_cast<std::int64_t>(grid.size()) > budget)
      throw BudgetExceeded("sphere grid exceeds the point budget");
  };

  if (n == Norm::L1) {
    std::vector<std::vector<int>> comps;
    l1_compositions(dimension, m, comps);
    for (const auto& comp : comps) {
      std::vector<int> nz;
      for (int j = 0; j < dimension; ++j)
        if (comp[static_cast<size_t>(j)] != 0) nz.push_back(j);
      // The first nonzero coordinate stays positive: one point per
      // antipodal pair, the measure is even under x -> -x.
      const int bits = static_cast<int>(nz.size()) - 1;
      for (unsigned mask = 0; mask < (1u << bits); ++mask) {
        Vector x = Vector::Zero(dimension);
        x(nz[0]) = comp[static_cast<size_t>(nz[0])] * step;
        for (int b = 0; b < bits; ++b) {
          const int j = nz[static_cast<size_t>(b + 1)];
          const double sgn = (mask >> b) & 1u ? -1.0 : 1.0;
          x(j) = sgn * comp[static_cast<size_t>(j)] * step;
        }
        push(std::move(x));
      }
    }
    return grid;
  }

  // Linf sphere: every lattice point with some |coordinate| = 1, visited at
  // its first maximal coordinate so each point appears exactly once.
  for (int face = 0; face < dimension; ++face) {
    for (int side = 0; side < 2; ++side) {
      const double fixed = side == 0 ? 1.0 : -1.0;
      std::vector<int> idx;
      for (int j = 0; j < dimension; ++j)
        if (j != face) idx.push_back(j);
      std::vector<int> coord(idx.size(), 0);
      const std::function<void(size_t)> rec = [&](size_t k) {
        if (k == idx.size()) {
          Vector x = Vector::Zero(dimension);
          x(face) = fixed;
          for (size_t u = 0; u < idx.size(); ++u)
            x(idx[u]) = coord[u] * step;
          for (int j = 0; j < dimension; ++j) {
            if (x(j) > 0.0) break;
            if (x(j) < 0.0) return;  // antipodal representative only
          }
          push(std::move(x));
          return;
        }
        // coordinates before the fixed face stay strictly inside the cube
        const int limit = idx[k] < face ? m - 1 : m;
        for (int v = -limit; v <= limit; ++v) {
          coord[k] = v;
          rec(k + 1);
        }
      };
      rec(0);
    }
  }
  return grid;
}

double sphere_covering_radius(int dimension, Norm n, int m) {
  // L1: rounding m|x_i| to integers summing to m moves a sphere point by at
  //     most 2r(N-r)/(Nm) <= N/(2m) in the L1 norm.
  // Linf: the maximal coordinate is matched exactly, the rest round to the
  //     nearest multiple of 1/m.
  if (n == Norm::L1) return dimension / (2.0 * m);
  return 1.0 / (2.0 * m);
}

QcmEstimate qcm(const MatrixFamily& f, int s, Norm n, double mesh,
                const Tolerances& tol, std::int64_t budget) {
  validate_family(f);
  if (!(mesh > 0.0)) throw ValidationError("mesh must be positive");
  if (s < f.dimension - 1)
    throw ValidationError("qcm horizon must be at least N-1");
  const int m = std::max(1, static_cast<int>(std::llround(1.0 / mesh)));

  QcmEstimate est;
  est.s = s;
  est.mesh = 1.0 / static_cast<double>(m);
  est.covering_radius = sphere_covering_radius(f.dimension, n, m);

  double lip = 1.0;  // identity product
  ProductSet ps = enumerate_products(f, s, n, tol.dedup_tol, std::nullopt, budget);
  for (const auto& level : ps.levels)
    for (const auto& e : level) lip = std::max(lip, e.norm);
  est.lipschitz_M = lip;

  std::vector<Vector> grid = sphere_grid(f.dimension, n, m, budget);
  est.grid_size = static_cast<std::int64_t>(grid.size());
  std::vector<double> rho(grid.size(), 0.0);
  const int workers = std::min<std::int64_t>(worker_count(),
                                             static_cast<std::int64_t>(grid.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < grid.size(); ++i)
      rho[i] = qcm_point(f, grid[i], s, n, tol, budget);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        try {
          for (size_t i = next.fetch_add(1); i < grid.size();
               i = next.fetch_add(1))
            rho[i] = qcm_point(f, grid[i], s, n, tol, budget);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  double best = kInf;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (rho[i] < best) {
      best = rho[i];
      est.argmin_point = grid[i];
    }
  }
  est.empirical_inf = best;
  est.certified_lower = std::max(0.0, best - lip * est.covering_radius);
  return est;
}

OvmEstimate ovm_empirical(const MatrixFamily& f, int horizon, Norm n,
                          const Tolerances& tol, bool exact_profile,
                          std::int64_t budget) {
  validate_family(f);
  if (horizon < 0) throw ValidationError("horizon must be nonnegative");

  OvmEstimate est;
  est.horizon = horizon;
  est.lower_bound = 1.0;
  est.witness_t = 0;
  est.level_max.assign(static_cast<size_t>(horizon) + 1, 0.0);
  est.level_max[0] = 1.0;
  est.level_witness.assign(static_cast<size_t>(horizon) + 1, Word{});
  est.profile_exact = true;
  if (horizon == 0) return est;

  double m1 = 0.0;
  for (const Matrix& a : f.members) m1 = std::max(m1, induced_matrix_norm(a, n));

  // Breadth-first over product levels with per-length dedup. While no
  // subtree has been cut the per-level maxima are exact and feed
  // submultiplicative future bounds; after that, parents that provably
  // cannot beat the running maximum are dropped. Dropped subtrees can only
  // tie, never exceed, so the final maximum and its first witness are exact.
  const std::int64_t phase_a_cap = exact_profile ? budget : 20'000;
  std::vector<double> exact_u{1.0};

  std::vector<ProductSet::Entry> parents;
  {
    ProductSet::Entry root;
    root.product = Matrix::Identity(f.dimension, f.dimension);
    root.norm = 1.0;
    parents.push_back(std::move(root));
  }
  std::int64_t total = 0;
  bool pruning = false;
  std::vector<double> max_future;

  const auto dist = [](const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
  };

  for (int t = 1; t <= horizon; ++t) {
    if (!pruning && !exact_profile && total > phase_a_cap) {
      pruning = true;
      est.profile_exact = false;
      // W(d): submultiplicative bound on any length-d product norm from the
      // completed levels; max_future(r) = max_{1<=d<=r} W(d).
      const int complete = static_cast<int>(exact_u.size()) - 1;
      std::vector<double> w(static_cast<size_t>(horizon) + 1, kInf);
      w[0] = 1.0;
      for (int d = 1; d <= horizon; ++d) {
        double bound = m1 * w[static_cast<size_t>(d - 1)];
        for (int j = 2; j <= std::min(d, complete); ++j)
          bound = std::min(bound, exact_u[static_cast<size_t>(j)] *
                                      w[static_cast<size_t>(d - j)]);
        if (d <= complete) bound = std::min(bound, exact_u[static_cast<size_t>(d)]);
        w[static_cast<size_t>(d)] = bound;
      }
      max_future.assign(static_cast<size_t>(horizon) + 1, 0.0);
      for (int r = 1; r <= horizon; ++r)
        max_future[static_cast<size_t>(r)] = std::max(
            max_future[static_cast<size_t>(r - 1)], w[static_cast<size_t>(r)]);
    }

    std::vector<ProductSet::Entry> level;
    DedupIndex idx(tol.dedup_tol);
    const int remaining = horizon - (t - 1);
    for (const auto& parent : parents) {
      if (pruning && t > 1 &&
          parent.norm * max_future[static_cast<size_t>(remaining)] <=
              est.lower_bound)
        continue;
      for (int i = 0; i < f.size(); ++i) {
        Matrix mm = f.members[static_cast<size_t>(i)] * parent.product;
        if (!idx.insert_if_new(flatten_matrix(mm), tol.dedup_tol, dist)) continue;
        ProductSet::Entry e;
        e.word = parent.word;
        e.word.push_back(i);
        e.norm = induced_matrix_norm(mm, n);
        e.product = std::move(mm);
        if (e.norm > est.lower_bound) {
          est.lower_bound = e.norm;
          est.witness_word = e.word;
          est.witness_t = t;
        }
        if (e.norm > est.level_max[static_cast<size_t>(t)]) {
          est.level_max[static_cast<size_t>(t)] = e.norm;
          est.level_witness[static_cast<size_t>(t)] = e.word;
        }
        level.push_back(std::move(e));
        if (++total > budget) throw BudgetExceeded("product budget exceeded");
      }
    }
    if (!pruning) exact_u.push_back(est.level_max[static_cast<size_t>(t)]);
    if (level.empty()) break;
    parents = std::move(level);
  }
  return est;
}

TransientBound transient_bound(const MatrixFamily& f, const SystemSpec& spec) {
  TransientBound tb;
  tb.certificate = classify(f, spec);
  if (tb.certificate.status != Stability::ExponentiallyStable &&
      tb.certificate.status != Stability::MarginalBounded)
    throw NotApplicable(
        "transient bound requires a stability certificate (exponentially "
        "stable or closed bounded semigroup)");
  tb.measure = qcm(f, spec.horizon_s, spec.norm, spec.sphere_mesh, spec.tol);
  if (!(tb.measure.certified_lower > 0.0))
    throw DegenerateMeasure(
        "certified quasi-controllability lower bound is zero");
  tb.qcm_lower = tb.measure.certified_lower;
  tb.bound = 1.0 / tb.qcm_lower;
  return tb;
}

}  // namespace qcs
