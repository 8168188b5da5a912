#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcs/geometry.hpp"
#include "qcs/measures.hpp"

using namespace qcs;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

MatrixFamily family2(std::vector<Matrix> members) {
  MatrixFamily f;
  f.dimension = 2;
  f.members = std::move(members);
  return f;
}

const Matrix kRot = mat2(0, -1, 1, 0);
const Tolerances kTol;

SystemSpec spec_for(const MatrixFamily& f, int s, double mesh = 1.0 / 32.0) {
  SystemSpec spec;
  spec.family = f;
  spec.norm = Norm::L1;
  spec.horizon_s = s;
  spec.product_depth = 3 * f.dimension;
  spec.sphere_mesh = mesh;
  return spec;
}

}  // namespace

TEST_CASE("qcm_point on the rotation family") {
  MatrixFamily f = family2({kRot});
  CHECK(qcm_point(f, vec2(1, 0), 1, Norm::L1, kTol) == doctest::Approx(1.0));
  CHECK(qcm_point(f, vec2(0.5, 0.5), 1, Norm::L1, kTol) == doctest::Approx(0.5));
}

TEST_CASE("qcm_point vanishes on an invariant axis") {
  MatrixFamily f = family2({mat2(1, 1, 0, 1)});
  CHECK(qcm_point(f, vec2(1, 0), 1, Norm::L1, kTol) == 0.0);
}

TEST_CASE("qcm_point rejects non-unit starts") {
  MatrixFamily f = family2({kRot});
  CHECK_THROWS_AS(qcm_point(f, vec2(2, 0), 1, Norm::L1, kTol), ValidationError);
}

TEST_CASE("qcm_point matches the closed form along the sphere segment") {
  MatrixFamily f = family2({kRot});
  for (double a : {0.0, 0.125, 0.25, 0.375, 0.5, 0.675, 0.875, 1.0}) {
    const double rho = qcm_point(f, vec2(a, 1 - a), 1, Norm::L1, kTol);
    CHECK(rho == doctest::Approx(oracle::rotation_rho_closed_form(a)).epsilon(1e-10));
  }
}

TEST_CASE("sphere grid: L1 counts, unit norm, dedup covers signs") {
  std::vector<Vector> grid = sphere_grid(2, Norm::L1, 32);
  CHECK(grid.size() == 64);  // half of the full 128 by antipodal symmetry
  for (const Vector& x : grid)
    CHECK(vector_norm(x, Norm::L1) == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<Vector> grid3 = sphere_grid(3, Norm::L1, 8);
  for (const Vector& x : grid3)
    CHECK(vector_norm(x, Norm::L1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sphere grid: Linf visits each surface point once") {
  std::vector<Vector> grid = sphere_grid(2, Norm::Linf, 2);
  // full surface has 16 points, antipodal halving keeps 8
  CHECK(grid.size() == 8);
  for (const Vector& x : grid)
    CHECK(vector_norm(x, Norm::Linf) == doctest::Approx(1.0));
  for (size_t i = 0; i < grid.size(); ++i)
    for (size_t j = i + 1; j < grid.size(); ++j) {
      CHECK((grid[i] - grid[j]).lpNorm<Eigen::Infinity>() > 1e-12);
      CHECK((grid[i] + grid[j]).lpNorm<Eigen::Infinity>() > 1e-12);
    }
}

TEST_CASE("covering radius formulas verified against brute force") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int dim : {2, 3}) {
    for (Norm n : {Norm::L1, Norm::Linf}) {
      const int m = 8;
      std::vector<Vector> half = sphere_grid(dim, n, m);
      std::vector<Vector> grid;  // full grid = half plus antipodes
      for (const Vector& g : half) {
        grid.push_back(g);
        grid.push_back(-g);
      }
      const double r = sphere_covering_radius(dim, n, m);
      double worst = 0.0;
      for (int it = 0; it < 10000; ++it) {
        Vector x(dim);
        if (n == Norm::L1) {
          for (int j = 0; j < dim; ++j) x(j) = gauss(rng);
        } else {
          for (int j = 0; j < dim; ++j) x(j) = uni(rng);
          x(static_cast<int>(rng() % dim)) = rng() % 2 ? 1.0 : -1.0;
        }
        const double len = vector_norm(x, n);
        if (len < 1e-9) continue;
        x /= len;
        double nearest = kInf;
        for (const Vector& g : grid)
          nearest = std::min(nearest, vector_norm(x - g, n));
        worst = std::max(worst, nearest);
        CHECK(nearest <= r + 1e-12);
      }
      // the bound is not badly loose either
      CHECK(worst >= 0.3 * r);
    }
  }
}

TEST_CASE("qcm on the rotation family brackets the closed-form infimum") {
  MatrixFamily f = family2({kRot});
  QcmEstimate est = qcm(f, 1, Norm::L1, 1.0 / 64.0, kTol);
  CHECK(est.empirical_inf == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.certified_lower > 0.45);
  CHECK(est.certified_lower <= 0.5);
  CHECK(est.lipschitz_M == doctest::Approx(1.0));
  CHECK(vector_norm(est.argmin_point, Norm::L1) == doctest::Approx(1.0));
  // dense sweep oracle: no grid point beats the closed-form minimum
  CHECK(est.empirical_inf >= 0.5 - 1e-12);
}

TEST_CASE("qcm of the shear family is zero") {
  MatrixFamily f = family2({mat2(1, 1, 0, 1)});
  QcmEstimate est = qcm(f, 1, Norm::L1, 1.0 / 16.0, kTol);
  CHECK(est.empirical_inf == 0.0);  // the grid contains the invariant axis
  CHECK(est.certified_lower == 0.0);
}

TEST_CASE("qcm of the identity family is zero everywhere") {
  MatrixFamily f = family2({Matrix::Identity(2, 2)});
  QcmEstimate est = qcm(f, 2, Norm::L1, 1.0 / 8.0, kTol);
  CHECK(est.empirical_inf == 0.0);
  CHECK(est.certified_lower == 0.0);
}

TEST_CASE("qcm point homogeneity through reach linearity") {
  // inscribed radius of the orbit polytope of y equals ||y|| rho(y/||y||)
  MatrixFamily f = family2({kRot, mat2(0.5, 0.2, -0.1, 0.8)});
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int it = 0; it < 15; ++it) {
    Vector y = vec2(uni(rng), uni(rng));
    const double len = vector_norm(y, Norm::L1);
    if (len < 0.1) continue;
    ReachSet rs = reach_points(f, y, 2, Norm::L1, kTol.dedup_tol);
    SymPolytope p{2, rs.all_points()};
    const double direct = inscribed_radius(p, Norm::L1);
    const double scaled = len * qcm_point(f, y / len, 2, Norm::L1, kTol);
    CHECK(direct == doctest::Approx(scaled).epsilon(1e-9));
  }
}

TEST_CASE("qcm monotonicity in s") {
  MatrixFamily f = family2({mat2(0.1, -0.9, 0.8, 0.3), mat2(0.7, 0.2, -0.4, 0.5)});
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 15; ++it) {
    Vector x = vec2(uni(rng), uni(rng));
    const double len = vector_norm(x, Norm::L1);
    if (len < 0.1) continue;
    x /= len;
    double prev = 0.0;
    for (int s = 1; s <= 4; ++s) {
      const double rho = qcm_point(f, x, s, Norm::L1, kTol);
      CHECK(rho >= prev - 1e-10);
      prev = rho;
    }
  }
}

TEST_CASE("qcm Lipschitz bound on random sphere pairs") {
  MatrixFamily f = family2({mat2(0.1, -0.9, 0.8, 0.3), mat2(0.7, 0.2, -0.4, 0.5)});
  const int s = 2;
  ProductSet ps = enumerate_products(f, s, Norm::L1, kTol.dedup_tol);
  double lip = 1.0;
  for (const auto& level : ps.levels)
    for (const auto& e : level) lip = std::max(lip, e.norm);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    Vector x = vec2(uni(rng), uni(rng));
    Vector y = vec2(uni(rng), uni(rng));
    const double lx = vector_norm(x, Norm::L1), ly = vector_norm(y, Norm::L1);
    if (lx < 0.1 || ly < 0.1) continue;
    x /= lx;
    y /= ly;
    const double rx = qcm_point(f, x, s, Norm::L1, kTol);
    const double ry = qcm_point(f, y, s, Norm::L1, kTol);
    CHECK(std::abs(rx - ry) <= lip * vector_norm(x - y, Norm::L1) + 1e-9);
  }
}

TEST_CASE("ovm: identity family peaks at t = 0") {
  OvmEstimate est = ovm_empirical(family2({Matrix::Identity(2, 2)}), 10,
                                  Norm::L1, kTol);
  CHECK(est.lower_bound == doctest::Approx(1.0));
  CHECK(est.witness_t == 0);
  CHECK(est.witness_word.empty());
}

TEST_CASE("ovm: Jordan block matches direct powering") {
  OvmEstimate est =
      ovm_empirical(family2({mat2(0.9, 10, 0, 0.9)}), 50, Norm::L1, kTol);
  double expect = 1.0;
  int arg = 0;
  for (int t = 1; t <= 50; ++t) {
    const double v = oracle::jordan_power_norm(0.9, 10.0, t);
    if (v > expect) {
      expect = v;
      arg = t;
    }
  }
  CHECK(arg == 9);
  CHECK(est.lower_bound == doctest::Approx(expect).epsilon(1e-12));
  CHECK(est.witness_t == 9);
  CHECK(std::abs(est.lower_bound - 39.1295) < 1e-3);
  // per-level profile agrees with the oracle as well
  for (int t = 0; t <= 50; ++t)
    CHECK(est.level_max[static_cast<size_t>(t)] ==
          doctest::Approx(oracle::jordan_power_norm(0.9, 10.0, t)).epsilon(1e-12));
}

TEST_CASE("ovm: contracting rotation never overshoots") {
  OvmEstimate est = ovm_empirical(family2({0.9 * kRot}), 20, Norm::L1, kTol);
  CHECK(est.lower_bound == doctest::Approx(1.0));
  CHECK(est.witness_t == 0);
}

TEST_CASE("ovm is at least 1 and nondecreasing in the horizon") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    MatrixFamily f = family2({mat2(uni(rng), uni(rng), uni(rng), uni(rng)),
                              mat2(uni(rng), uni(rng), uni(rng), uni(rng))});
    double prev = 0.0;
    for (int h : {0, 2, 4, 6}) {
      OvmEstimate est = ovm_empirical(f, h, Norm::L1, kTol);
      CHECK(est.lower_bound >= 1.0);
      CHECK(est.lower_bound >= prev - 1e-12);
      prev = est.lower_bound;
    }
  }
}

TEST_CASE("ovm pruning agrees with exhaustive search") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uni(-0.8, 0.8);
  for (int it = 0; it < 8; ++it) {
    MatrixFamily f = family2({mat2(uni(rng), uni(rng), uni(rng), uni(rng)),
                              mat2(uni(rng), uni(rng), uni(rng), uni(rng))});
    OvmEstimate pruned = ovm_empirical(f, 14, Norm::L1, kTol);
    OvmEstimate exact = ovm_empirical(f, 14, Norm::L1, kTol, true);
    CHECK(pruned.lower_bound == doctest::Approx(exact.lower_bound).epsilon(1e-14));
    CHECK(pruned.witness_t == exact.witness_t);
    CHECK(pruned.witness_word == exact.witness_word);
  }
}

TEST_CASE("transient bound on the marginal rotation") {
  MatrixFamily f = family2({kRot});
  TransientBound tb = transient_bound(f, spec_for(f, 1, 1.0 / 64.0));
  CHECK(tb.certificate.status == Stability::MarginalBounded);
  CHECK(tb.qcm_lower > 0.45);
  CHECK(tb.bound == doctest::Approx(1.0 / tb.qcm_lower));
  OvmEstimate ovm = ovm_empirical(f, 30, Norm::L1, kTol);
  CHECK(ovm.lower_bound <= tb.bound + 1e-9);
}

TEST_CASE("transient bound on the contracting rotation") {
  MatrixFamily f = family2({0.9 * kRot});
  TransientBound tb = transient_bound(f, spec_for(f, 1, 1.0 / 64.0));
  CHECK(tb.certificate.status == Stability::ExponentiallyStable);
  CHECK(tb.qcm_lower >= 0.40);
  CHECK(tb.qcm_lower <= 0.45 + 1e-12);
  OvmEstimate ovm = ovm_empirical(f, 30, Norm::L1, kTol);
  CHECK(ovm.lower_bound <= tb.bound + 1e-9);
}

TEST_CASE("transient bound refuses unstable families") {
  MatrixFamily f = family2({1.1 * kRot});
  CHECK_THROWS_AS(transient_bound(f, spec_for(f, 1)), NotApplicable);
}

TEST_CASE("transient bound refuses degenerate measures") {
  MatrixFamily f = family2({mat2(0.5, 0.5, 0, 0.5)});  // stable, invariant axis
  CHECK_THROWS_AS(transient_bound(f, spec_for(f, 2)), DegenerateMeasure);
}
