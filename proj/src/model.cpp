#include "qcs/model.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qcs {

using nlohmann::json;

const char* norm_name(Norm n) { return n == Norm::L1 ? "l1" : "linf"; }

std::optional<Norm> norm_from_name(const std::string& name) {
  if (name == "l1") return Norm::L1;
  if (name == "linf") return Norm::Linf;
  return std::nullopt;
}

Norm dual_norm(Norm n) { return n == Norm::L1 ? Norm::Linf : Norm::L1; }

double vector_norm(const Vector& v, Norm n) {
  return n == Norm::L1 ? v.lpNorm<1>() : v.lpNorm<Eigen::Infinity>();
}

double induced_matrix_norm(const Matrix& m, Norm n) {
  double best = 0.0;
  if (n == Norm::L1) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      best = std::max(best, m.col(j).lpNorm<1>());
  } else {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      best = std::max(best, m.row(i).lpNorm<1>());
  }
  return best;
}

void validate_family(const MatrixFamily& family) {
  if (family.dimension <= 0)
    throw ValidationError("dimension must be a positive integer");
  if (family.members.empty())
    throw ValidationError("family must have at least one member");
  if (!family.labels.empty() && family.labels.size() != family.members.size())
    throw ValidationError("labels must be absent or match the member count");
  const int n = family.dimension;
  for (size_t k = 0; k < family.members.size(); ++k) {
    const Matrix& m = family.members[k];
    if (m.rows() != n || m.cols() != n) {
      std::ostringstream os;
      os << "member " << k << " is " << m.rows() << "x" << m.cols()
         << ", expected " << n << "x" << n;
      throw ValidationError(os.str());
    }
    if (!m.allFinite()) {
      std::ostringstream os;
      os << "member " << k << " has a non-finite entry";
      throw ValidationError(os.str());
    }
  }
}

namespace {

double require_number(const json& v, const char* what) {
  if (!v.is_number()) throw SyntaxError(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

SystemSpec parse_and_validate(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SyntaxError("top-level value must be an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw SyntaxError("missing integer field \"dimension\"");
  if (!doc.contains("matrices") || !doc["matrices"].is_array())
    throw SyntaxError("missing array field \"matrices\"");

  SystemSpec spec;
  spec.family.dimension = doc["dimension"].get<int>();
  const int n = spec.family.dimension;
  if (n <= 0) throw ValidationError("dimension must be a positive integer");

  bool any_label = false;
  for (const json& entry : doc["matrices"]) {
    if (!entry.is_object() || !entry.contains("rows") || !entry["rows"].is_array())
      throw SyntaxError("each matrix must be an object with a \"rows\" array");
    const json& rows = entry["rows"];
    Matrix m(rows.size(), n >= 1 ? n : 1);
    if (static_cast<int>(rows.size()) != n) {
      std::ostringstream os;
      os << "matrix has " << rows.size() << " rows, expected " << n;
      throw ValidationError(os.str());
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
        std::ostringstream os;
        os << "matrix row " << i << " must have " << n << " entries";
        throw ValidationError(os.str());
      }
      for (int j = 0; j < n; ++j) m(i, j) = require_number(rows[i][j], "matrix entry");
    }
    spec.family.members.push_back(std::move(m));
    std::string label;
    if (entry.contains("name")) {
      if (!entry["name"].is_string()) throw SyntaxError("matrix \"name\" must be a string");
      label = entry["name"].get<std::string>();
      any_label = true;
    }
    spec.family.labels.push_back(label);
  }
  if (!any_label) spec.family.labels.clear();
  validate_family(spec.family);

  spec.norm = Norm::L1;
  if (doc.contains("norm")) {
    if (!doc["norm"].is_string()) throw SyntaxError("\"norm\" must be a string");
    auto n_opt = norm_from_name(doc["norm"].get<std::string>());
    if (!n_opt) throw ValidationError("norm must be \"l1\" or \"linf\"");
    spec.norm = *n_opt;
  }

  spec.horizon_s = n;
  spec.product_depth = 3 * n;
  spec.sphere_mesh = 1.0 / 32.0;
  if (doc.contains("analysis")) {
    const json& a = doc["analysis"];
    if (!a.is_object()) throw SyntaxError("\"analysis\" must be an object");
    if (a.contains("s")) {
      if (!a["s"].is_number_integer()) throw SyntaxError("analysis.s must be an integer");
      spec.horizon_s = a["s"].get<int>();
    }
    if (a.contains("depth")) {
      if (!a["depth"].is_number_integer()) throw SyntaxError("analysis.depth must be an integer");
      spec.product_depth = a["depth"].get<int>();
    }
    if (a.contains("mesh")) spec.sphere_mesh = require_number(a["mesh"], "analysis.mesh");
  }

  if (spec.horizon_s < n - 1)
    throw ValidationError("analysis.s must be at least dimension - 1");
  if (spec.product_depth < 1)
    throw ValidationError("analysis.depth must be at least 1");
  if (!(spec.sphere_mesh > 0.0) || !std::isfinite(spec.sphere_mesh))
    throw ValidationError("analysis.mesh must be a positive number");
  return spec;
}

std::string family_to_document(const MatrixFamily& family, Norm norm) {
  json doc;
  doc["dimension"] = family.dimension;
  doc["norm"] = norm_name(norm);
  json matrices = json::array();
  for (size_t k = 0; k < family.members.size(); ++k) {
    json entry;
    if (!family.labels.empty() && !family.labels[k].empty())
      entry["name"] = family.labels[k];
    json rows = json::array();
    const Matrix& m = family.members[k];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    entry["rows"] = std::move(rows);
    matrices.push_back(std::move(entry));
  }
  doc["matrices"] = std::move(matrices);
  return doc.dump(2) + "\n";
}

}  // namespace qcs
