#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qcs/errors.hpp"

namespace qcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Polyhedral norm selector. All balls, measures and induced matrix norms
/// of the analyzer are taken in one of these two norms.
enum class Norm { L1, Linf };

const char* norm_name(Norm n);
std::optional<Norm> norm_from_name(const std::string& name);

/// L1 <-> Linf.
Norm dual_norm(Norm n);

/// ||v|| under the selected norm.
double vector_norm(const Vector& v, Norm n);

/// Operator norm max_{||x||=1} ||Mx||: maximum absolute column sum for L1,
/// maximum absolute row sum for Linf.
double induced_matrix_norm(const Matrix& m, Norm n);

/// A finite family of square matrices, the generator of the difference
/// inclusion x(t+1) in {A_1 x, ..., A_k x}. Member order is canonical:
/// every enumeration downstream respects the order given here.
struct MatrixFamily {
  int dimension = 0;
  std::vector<Matrix> members;
  std::vector<std::string> labels;  // empty or one label per member

  int size() const { return static_cast<int>(members.size()); }
};

/// Throws ValidationError unless every member is dimension x dimension with
/// finite entries and the member list is nonempty.
void validate_family(const MatrixFamily& family);

struct Tolerances {
  double rank_tol = 1e-9;
  double dedup_tol = 1e-12;
  double lp_tol = 1e-10;
};

/// A fully validated analysis task: family, norm and resolution knobs.
struct SystemSpec {
  MatrixFamily family;
  Norm norm = Norm::L1;
  int horizon_s = 0;      // the s of qcm_s; >= N-1
  int product_depth = 0;  // enumeration depth for products
  double sphere_mesh = 1.0 / 32.0;
  Tolerances tol;
};

/// Parse the family file format (JSON) and fill defaults:
/// horizon_s = N, product_depth = 3N, sphere_mesh = 1/32,
/// rank_tol = 1e-9, dedup_tol = 1e-12, lp_tol = 1e-10.
/// Throws SyntaxError on malformed documents and ValidationError on
/// structurally invalid ones.
SystemSpec parse_and_validate(const std::string& document);

/// Serialize a family back into the family file format.
std::string family_to_document(const MatrixFamily& family, Norm norm);

}  // namespace qcs
