#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qcs/model.hpp"

namespace qcs {

/// Spatial-hash dedup over flattened coordinates. Cells have side `cell`,
/// so two elements within `cell` of each other (in any norm dominating
/// Linf) sit in the same or an adjacent cell. Adjacent cells are probed
/// exhaustively for up to 3 coordinates and by the home cell alone above
/// that, which still catches bit-equal duplicates.
class DedupIndex {
 public:
  explicit DedupIndex(double cell) : cell_(std::max(cell, 1e-300)) {}

  /// Returns false if a stored element lies within tol of `flat` under
  /// `dist`, otherwise stores `flat` and returns true.
  template <class DistFn>
  bool insert_if_new(const Vector& flat, double tol, DistFn dist) {
    const std::vector<std::int64_t> q = quantize(flat);
    const int d = static_cast<int>(q.size());
    bool fresh = true;
    if (d <= 3) {
      std::vector<std::int64_t> probe(q);
      int total = 1;
      for (int i = 0; i < d; ++i) total *= 3;
      for (int c = 0; c < total && fresh; ++c) {
        int rem = c;
        for (int i = 0; i < d; ++i) {
          probe[static_cast<size_t>(i)] = q[static_cast<size_t>(i)] + (rem % 3) - 1;
          rem /= 3;
        }
        fresh = !bucket_has_match(hash_key(probe), flat, tol, dist);
      }
    } else {
      fresh = !bucket_has_match(hash_key(q), flat, tol, dist);
    }
    if (fresh) {
      buckets_[hash_key(q)].push_back(static_cast<int>(stored_.size()));
      stored_.push_back(flat);
    }
    return fresh;
  }

  size_t size() const { return stored_.size(); }

 private:
  std::vector<std::int64_t> quantize(const Vector& flat) const {
    std::vector<std::int64_t> q(static_cast<size_t>(flat.size()));
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      double v = flat(i) / cell_;
      v = std::clamp(v, -9.0e15, 9.0e15);
      q[static_cast<size_t>(i)] = std::llround(v);
    }
    return q;
  }

  static std::uint64_t hash_key(const std::vector<std::int64_t>& q) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : q) {
      for (int b = 0; b < 8; ++b) {
        h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffull;
        h *= 1099511628211ull;
      }
    }
    return h;
  }

  template <class DistFn>
  bool bucket_has_match(std::uint64_t key, const Vector& flat, double tol,
                        DistFn dist) const {
    auto it = buckets_.find(key);
    if (it == buckets_.end()) return false;
    for (int idx : it->second)
      if (dist(stored_[static_cast<size_t>(idx)], flat) <= tol) return true;
    return false;
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
  std::vector<Vector> stored_;
};

inline Vector flatten_matrix(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace qcs
