#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qcs/linalg.hpp"
#include "qcs/geometry.hpp"

using namespace qcs;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector unit(int n, int j, double sgn = 1.0) {
  Vector v = Vector::Zero(n);
  v(j) = sgn;
  return v;
}

}  // namespace

TEST_CASE("lp: box maximum") {
  LpProblem p;
  p.objective = unit(2, 0);
  p.add(unit(2, 0), -1.0, 1.0);
  p.add(unit(2, 1), -1.0, 1.0);
  LpOutcome out = solve_lp(p, 1e-10);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == doctest::Approx(1.0));
  CHECK(out.point(0) == doctest::Approx(1.0));
}

TEST_CASE("lp: contradictory bounds are infeasible") {
  LpProblem p;
  p.objective = unit(2, 0);
  p.add(unit(2, 0), -kInf, -1.0);
  p.add(unit(2, 0), 1.0, kInf);
  CHECK(solve_lp(p, 1e-10).status == LpStatus::Infeasible);
}

TEST_CASE("lp: free direction is unbounded") {
  LpProblem p;
  p.objective = unit(2, 0);
  p.add(unit(2, 1), -kInf, 0.0);
  CHECK(solve_lp(p, 1e-10).status == LpStatus::Unbounded);
}

TEST_CASE("lp: equality rows and nonnegative variables") {
  // min x1 + x2 with x1 - x2 = 2, x >= 0  ->  (2, 0)
  LpProblem p;
  p.objective = Vector::Constant(2, -1.0);
  p.nonneg = {true, true};
  Vector row(2);
  row << 1.0, -1.0;
  p.add(row, 2.0, 2.0);
  LpOutcome out = solve_lp(p, 1e-10);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == doctest::Approx(-2.0));
  CHECK(out.point(0) == doctest::Approx(2.0));
  CHECK(out.point(1) == doctest::Approx(0.0));
}

TEST_CASE("lp: random feasible bounded problems return a maximum") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 120; ++it) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int mrows = n + 1 + static_cast<int>(rng() % 6);
    LpProblem p;
    p.objective = Vector::NullaryExpr(n, [&](Eigen::Index) { return uni(rng); });
    // box keeps it bounded; extra random interval rows, all containing 0
    for (int j = 0; j < n; ++j) p.add(unit(n, j), -2.0, 2.0);
    for (int r = 0; r < mrows; ++r) {
      Vector row = Vector::NullaryExpr(n, [&](Eigen::Index) { return uni(rng); });
      p.add(row, -1.5, 1.5);
    }
    LpOutcome out = solve_lp(p, 1e-10);
    REQUIRE(out.status == LpStatus::Optimal);
    for (const auto& c : p.constraints) {
      const double v = c.row.dot(out.point);
      CHECK(v >= c.lower - 1e-8);
      CHECK(v <= c.upper + 1e-8);
    }
    // duality spot-check by sampling: no random feasible point beats it
    for (int trial = 0; trial < 40; ++trial) {
      Vector cand =
          Vector::NullaryExpr(n, [&](Eigen::Index) { return 2.0 * uni(rng); });
      bool feasible = true;
      for (const auto& c : p.constraints) {
        const double v = c.row.dot(cand);
        if (v < c.lower - 1e-12 || v > c.upper + 1e-12) {
          feasible = false;
          break;
        }
      }
      if (feasible) CHECK(p.objective.dot(cand) <= out.value + 1e-8);
    }
  }
}

TEST_CASE("lp: deterministic for identical input") {
  LpProblem p;
  p.objective = Vector::Constant(3, 1.0);
  for (int j = 0; j < 3; ++j) p.add(unit(3, j), -1.0, 2.0);
  Vector row(3);
  row << 1.0, 1.0, 1.0;
  p.add(row, -kInf, 4.0);
  LpOutcome a = solve_lp(p, 1e-10);
  LpOutcome b = solve_lp(p, 1e-10);
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.value == b.value);
  CHECK((a.point - b.point).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("min_gain basics") {
  CHECK(min_gain(Matrix::Identity(2, 2), Norm::L1) == doctest::Approx(1.0));
  CHECK(min_gain(mat2(1, 0, 0, 0), Norm::L1) == 0.0);
  // closed-form inverse: [[-1,0.5],[0.5,-1]]^-1 has max column sum 2
  CHECK(min_gain(mat2(-1, 0.5, 0.5, -1), Norm::L1) == doctest::Approx(0.5));
  CHECK(min_gain(Matrix::Zero(3, 3), Norm::L1) == 0.0);
}

TEST_CASE("min_gain properties on random matrices") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uni(rng);
    m += 3.0 * Matrix::Identity(n, n);  // keep it well-conditioned
    const double lambda = uni(rng);
    for (Norm nm : {Norm::L1, Norm::Linf}) {
      const double g = min_gain(m, nm);
      REQUIRE(g > 0.0);
      CHECK(g * induced_matrix_norm(m.inverse(), nm) ==
            doctest::Approx(1.0).epsilon(1e-12));
      CHECK(min_gain(lambda * m, nm) ==
            doctest::Approx(std::abs(lambda) * g).epsilon(1e-10));
      // min over the unit sphere: no sampled direction beats it
      for (int trial = 0; trial < 25; ++trial) {
        Vector v = Vector::NullaryExpr(n, [&](Eigen::Index) { return uni(rng); });
        const double len = vector_norm(v, nm);
        if (len < 1e-9) continue;
        v /= len;
        CHECK(vector_norm(m * v, nm) >= g - 1e-9);
      }
    }
  }
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(spectral_radius(mat2(0, 1, 0, 0)) == doctest::Approx(0.0));
  CHECK(spectral_radius(mat2(0, 2, 2, 0)) == doctest::Approx(2.0));
}

TEST_CASE("spectral radius of powers") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uni(rng);
    const double r = spectral_radius(m);
    Matrix p = m;
    for (int k = 2; k <= 4; ++k) {
      p = p * m;
      CHECK(spectral_radius(p) == doctest::Approx(std::pow(r, k)).epsilon(1e-7));
    }
  }
}

TEST_CASE("span_dim") {
  Vector a(2), b(2), c(2), d(2);
  a << 1, 0;
  b << 0, 1;
  c << 2, 2;
  d << 1, 1;
  CHECK(span_dim({a}, 1e-9) == 1);
  CHECK(span_dim({a, b}, 1e-9) == 2);
  CHECK(span_dim({d, c}, 1e-9) == 1);  // collinear
  CHECK(span_dim({Vector::Zero(2)}, 1e-9) == 0);
}
