#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcs/model.hpp"

namespace qcs {

inline constexpr std::int64_t kDefaultPointBudget = 1'000'000;

/// Switching word: member indices applied left to right, so the word
/// (i_1, ..., i_t) maps x to A_{i_t} ... A_{i_1} x.
using Word = std::vector<int>;

std::string word_to_string(const Word& w);

/// Reachable points X(x,t,0) for t = 0..s, one witness word per
/// deduplicated point. steps[0] is {(x, empty word)}.
struct ReachSet {
  struct Entry {
    Vector point;
    Word word;
  };
  Vector base_point;
  std::vector<std::vector<Entry>> steps;
  double dedup_tol = 0.0;

  std::vector<Vector> all_points() const;
};

ReachSet reach_points(const MatrixFamily& f, const Vector& x, int s,
                      Norm n, double dedup_tol,
                      std::int64_t budget = kDefaultPointBudget);

/// dim span{ X(x,t,0) : 0 <= t <= s }.
int orbit_span_dim(const MatrixFamily& f, const Vector& x, int s,
                   Norm n, double rank_tol, double dedup_tol,
                   std::int64_t budget = kDefaultPointBudget);

/// Products of all words of length 1..depth, deduplicated within each
/// length (equal matrices of equal length generate identical subtrees).
struct ProductSet {
  struct Entry {
    Matrix product;
    Word word;
    double norm;  // induced norm of product in the active norm
  };
  int depth = 0;
  std::vector<std::vector<Entry>> levels;  // levels[t-1] = words of length t
};

/// When prune_bound is set the search cuts children of products whose norm
/// falls below it; callers may only do that for norm-monotone uses where
/// discarded subtrees provably cannot matter.
ProductSet enumerate_products(const MatrixFamily& f, int depth, Norm n,
                              double dedup_tol,
                              std::optional<double> prune_bound = std::nullopt,
                              std::int64_t budget = kDefaultPointBudget);

enum class QcStatus { QuasiControllable, NotQuasiControllable, Unknown };

const char* qc_status_name(QcStatus s);

struct QcVerdict {
  QcStatus status = QcStatus::Unknown;
  /// Positive when quasi-controllability is certified by a measure bound.
  double certified_qcm_lower = 0.0;
  /// For NotQuasiControllable: basis of a common invariant proper subspace;
  /// every A_i maps each basis vector into its span within rank_tol.
  std::vector<Vector> witness_basis;
  std::string evidence;
};

/// Decide quasi-controllability: exact invariant-subspace search in
/// dimensions 1 and N-1 (eigenspace intersections of the members and their
/// transposes), orbit-span probes, then the certified measure bound.
/// Complete for N <= 3; N >= 4 may return Unknown.
QcVerdict qc_check(const MatrixFamily& f, const SystemSpec& spec);

/// Verify the NotQuasiControllable witness contract: every member maps each
/// basis vector into span(basis) within tol (relative).
bool invariant_subspace_ok(const MatrixFamily& f,
                           const std::vector<Vector>& basis, double tol);

}  // namespace qcs
