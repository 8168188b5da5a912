#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcs/linalg.hpp"
#include "qcs/reachability.hpp"

namespace qcs {

enum class Stability {
  ExponentiallyStable,
  AbsolutelyExponentiallyUnstable,
  MarginalBounded,
  Inconclusive,
};

const char* stability_name(Stability s);

/// Classification verdict with a re-verifiable certificate.
struct Verdict {
  Stability status = Stability::Inconclusive;

  // ExponentiallyStable: every word of length cert_depth has induced norm
  // at most cert_bound^cert_depth with cert_bound < 1.
  int cert_depth = 0;
  double cert_bound = 0.0;

  // AbsolutelyExponentiallyUnstable: cert_word has spectral radius
  // cert_spectral_radius > 1; qc_flag records quasi-controllability, which
  // extends the instability to every starting point and nearby family.
  Word cert_word;
  double cert_spectral_radius = 0.0;
  bool qc_flag = false;

  // MarginalBounded: the product semigroup closed after semigroup_size
  // distinct products.
  int semigroup_size = 0;

  std::optional<double> mu;       // trajectory bound of the stability inequality
  std::optional<double> epsilon;  // growth/decay exponent
  std::optional<double> gamma;    // instability prefactor when measurable

  double jsr_lower = 0.0;
  double jsr_upper = kInf;
  std::vector<std::string> diagnostics;
};

struct JsrBounds {
  double lower = 0.0;
  double upper = kInf;
};

/// lower = max over enumerated products of spectral_radius^(1/t),
/// upper = min over t <= depth of (max length-t induced norm)^(1/t).
JsrBounds jsr_bounds(const MatrixFamily& f, int depth, Norm n,
                     const Tolerances& tol,
                     std::int64_t budget = kDefaultPointBudget);

/// Trichotomy classification. Product levels are explored past
/// spec.product_depth while the budget lasts, so slowly certifiable
/// families (single members with long transients) still resolve.
Verdict classify(const MatrixFamily& f, const SystemSpec& spec,
                 std::int64_t budget = kDefaultPointBudget);

struct InstabilityProfile {
  double epsilon_estimate = 0.0;
  std::vector<double> log_min_growth;  // ln(min over samples of g_u(t))
};

/// Least-squares growth exponent of ln(min_u max{||x||: x reachable from u
/// at t}) over the last half of the horizon, u over sample_count random
/// unit vectors (fixed seed unless given).
InstabilityProfile instability_profile(const MatrixFamily& f, int horizon,
                                       int sample_count, Norm n,
                                       const Tolerances& tol,
                                       std::uint64_t seed = 0x0b5e55ed,
                                       std::int64_t budget = kDefaultPointBudget);

}  // namespace qcs
