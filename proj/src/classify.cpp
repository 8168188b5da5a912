#include "qcs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcs/dedup.hpp"
#include "qcs/linalg.hpp"

namespace qcs {

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::ExponentiallyStable: return "exponentially_stable";
    case Stability::AbsolutelyExponentiallyUnstable:
      return "absolutely_exponentially_unstable";
    case Stability::MarginalBounded: return "marginal_bounded";
    default: return "inconclusive";
  }
}

JsrBounds jsr_bounds(const MatrixFamily& f, int depth, Norm n,
                     const Tolerances& tol, std::int64_t budget) {
  validate_family(f);
  if (depth < 1) throw ValidationError("depth must be at least 1");
  ProductSet ps = enumerate_products(f, depth, n, tol.dedup_tol, std::nullopt, budget);
  JsrBounds b;
  for (int t = 1; t <= depth; ++t) {
    double level_norm = 0.0;
    for (const auto& e : ps.levels[static_cast<size_t>(t - 1)]) {
      level_norm = std::max(level_norm, e.norm);
      b.lower = std::max(b.lower, std::pow(spectral_radius(e.product), 1.0 / t));
    }
    b.upper = std::min(b.upper, std::pow(level_norm, 1.0 / t));
  }
  return b;
}

Verdict classify(const MatrixFamily& f, const SystemSpec& spec,
                 std::int64_t budget) {
  validate_family(f);
  const Norm n = spec.norm;
  const double dedup_tol = spec.tol.dedup_tol;
  Verdict v;

  // Product levels are explored breadth-first. Closure of the generated
  // semigroup is detected globally; per-level maxima feed the norm-based
  // upper bound. Levels continue past spec.product_depth while the budget
  // lasts, so slow single-member certificates still resolve.
  const int depth_cap = std::max(spec.product_depth, 65536);
  const auto dist = [](const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
  };

  DedupIndex global(dedup_tol);
  global.insert_if_new(flatten_matrix(Matrix::Identity(f.dimension, f.dimension)),
                       dedup_tol, dist);
  double semigroup_mu = 1.0;  // identity included
  int semigroup_size = 1;

  std::vector<ProductSet::Entry> parents;
  {
    ProductSet::Entry root;
    root.product = Matrix::Identity(f.dimension, f.dimension);
    root.norm = 1.0;
    parents.push_back(std::move(root));
  }
  std::vector<double> level_norms{1.0};
  std::int64_t total = 0;
  bool budget_hit = false;

  for (int t = 1; t <= depth_cap && !budget_hit; ++t) {
    std::vector<ProductSet::Entry> level;
    DedupIndex idx(dedup_tol);
    bool any_new_global = false;
    double level_norm = 0.0;
    for (const auto& parent : parents) {
      for (int i = 0; i < f.size(); ++i) {
        Matrix m = f.members[static_cast<size_t>(i)] * parent.product;
        Vector fm = flatten_matrix(m);
        if (!idx.insert_if_new(fm, dedup_tol, dist)) continue;
        ProductSet::Entry e;
        e.word = parent.word;
        e.word.push_back(i);
        e.norm = induced_matrix_norm(m, n);
        e.product = std::move(m);
        level_norm = std::max(level_norm, e.norm);

        if (global.insert_if_new(fm, dedup_tol, dist)) {
          any_new_global = true;
          ++semigroup_size;
          semigroup_mu = std::max(semigroup_mu, e.norm);
        }
        // spectral radius never exceeds the induced norm, so only products
        // with norm above 1 can witness instability
        if (e.norm > 1.0 + 1e-9) {
          const double rho = spectral_radius(e.product);
          if (rho > 1.0 + 1e-9 && rho > v.cert_spectral_radius) {
            v.cert_spectral_radius = rho;
            v.cert_word = e.word;
          }
          v.jsr_lower = std::max(v.jsr_lower, std::pow(rho, 1.0 / t));
        }
        level.push_back(std::move(e));
        if (++total > budget) {
          budget_hit = true;
          break;
        }
      }
      if (budget_hit) break;
    }
    if (budget_hit) break;
    level_norms.push_back(level_norm);
    v.jsr_upper = std::min(v.jsr_upper, std::pow(level_norm, 1.0 / t));

    if (v.jsr_upper < 1.0) {
      v.status = Stability::ExponentiallyStable;
      v.cert_depth = t;
      v.cert_bound = v.jsr_upper;
      v.epsilon = -std::log(v.jsr_upper);
      double mu = 1.0;
      for (int r = 1; r < t; ++r)
        mu = std::max(mu, level_norms[static_cast<size_t>(r)]);
      v.mu = mu;
      return v;
    }
    if (!v.cert_word.empty()) {
      QcVerdict qc = qc_check(f, spec);
      v.qc_flag = qc.status == QcStatus::QuasiControllable;
      v.epsilon = std::log(std::pow(v.cert_spectral_radius,
                                    1.0 / static_cast<double>(v.cert_word.size())));
      if (v.qc_flag) {
        v.status = Stability::AbsolutelyExponentiallyUnstable;
        v.diagnostics.push_back(
            "quasi-controllable and not stable: instability holds from every "
            "starting point and for every nearby family");
      } else {
        v.status = Stability::Inconclusive;
        v.diagnostics.push_back(
            "a product has spectral radius above 1, but quasi-controllability "
            "was not certified; absolute exponential instability not asserted");
      }
      return v;
    }
    if (!any_new_global) {
      // No product of this length is new: the generated semigroup is closed
      // and finite, so every trajectory norm is bounded by its max norm.
      v.status = Stability::MarginalBounded;
      v.semigroup_size = semigroup_size;
      v.mu = semigroup_mu;
      return v;
    }
    parents = std::move(level);
  }

  v.status = Stability::Inconclusive;
  v.diagnostics.push_back(
      budget_hit ? "product budget exhausted before any certificate"
                 : "depth cap reached before any certificate");
  return v;
}

InstabilityProfile instability_profile(const MatrixFamily& f, int horizon,
                                       int sample_count, Norm n,
                                       const Tolerances& tol,
                                       std::uint64_t seed,
                                       std::int64_t budget) {
  validate_family(f);
  if (horizon < 10) throw ValidationError("profile horizon must be >= 10");
  if (sample_count < 1) throw ValidationError("need at least one sample");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> min_growth(static_cast<size_t>(horizon) + 1, kInf);
  for (int u = 0; u < sample_count; ++u) {
    Vector x(f.dimension);
    double len = 0.0;
    do {
      for (int j = 0; j < f.dimension; ++j) x(j) = gauss(rng);
      len = vector_norm(x, n);
    } while (!(len > 1e-12));
    x /= len;
    ReachSet rs = reach_points(f, x, horizon, n, tol.dedup_tol, budget);
    for (int t = 0; t <= horizon; ++t) {
      double g = 0.0;
      for (const auto& e : rs.steps[static_cast<size_t>(t)])
        g = std::max(g, vector_norm(e.point, n));
      min_growth[static_cast<size_t>(t)] =
          std::min(min_growth[static_cast<size_t>(t)], g);
    }
  }

  InstabilityProfile prof;
  prof.log_min_growth.resize(min_growth.size());
  for (size_t t = 0; t < min_growth.size(); ++t)
    prof.log_min_growth[t] = std::log(std::max(min_growth[t], 1e-300));

  // least-squares slope over the last half of the horizon
  const int t0 = horizon / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int t = t0; t <= horizon; ++t) {
    const double y = prof.log_min_growth[static_cast<size_t>(t)];
    sx += t;
    sy += y;
    sxx += static_cast<double>(t) * t;
    sxy += t * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  prof.epsilon_estimate = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  return prof;
}

}  // namespace qcs
