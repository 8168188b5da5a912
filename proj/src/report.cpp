#include "qcs/report.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qcs/classify.hpp"
#include "qcs/families.hpp"
#include "qcs/measures.hpp"
#include "qcs/robustness.hpp"

namespace qcs {

namespace {

using json = nlohmann::ordered_json;

// All numeric output is serialized with 17 significant digits so reports
// round-trip bit-exactly and golden files stay stable.
void write_value(std::string& out, const json& v, int depth) {
  const std::string pad(static_cast<size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(depth + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      break;
    }
    case json::value_t::string: {
      out += '"';
      for (char c : v.get<std::string>()) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          case '\r': out += "\\r"; break;
          default:
            if (static_cast<unsigned char>(c) < 0x20) {
              char buf[8];
              std::snprintf(buf, sizeof buf, "\\u%04x", c);
              out += buf;
            } else {
              out += c;
            }
        }
      }
      out += '"';
      break;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        write_value(out, v[i], depth + 1);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      break;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad_in + '"' + it.key() + "\": ";
        write_value(out, it.value(), depth + 1);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      break;
    }
    default:
      out += "null";
  }
}

std::string dump_report(const json& v) {
  std::string out;
  write_value(out, v, 0);
  out += '\n';
  return out;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json family_to_json(const MatrixFamily& f, Norm n) {
  json doc;
  doc["dimension"] = f.dimension;
  doc["norm"] = norm_name(n);
  json matrices = json::array();
  for (size_t k = 0; k < f.members.size(); ++k) {
    json entry;
    if (!f.labels.empty() && !f.labels[k].empty()) entry["name"] = f.labels[k];
    json rows = json::array();
    for (Eigen::Index i = 0; i < f.members[k].rows(); ++i)
      rows.push_back(vector_to_json(f.members[k].row(i).transpose()));
    entry["rows"] = std::move(rows);
    matrices.push_back(std::move(entry));
  }
  doc["matrices"] = std::move(matrices);
  return doc;
}

struct CommandContext {
  std::string command;
  std::string digest;
  SystemSpec spec;
  json parameters;
  json results;
  std::vector<std::string> warnings;
};

json assemble(const CommandContext& ctx, std::int64_t wall_ms) {
  json report;
  report["command"] = ctx.command;
  report["input_digest"] = ctx.digest;
  report["parameters"] = ctx.parameters;
  report["results"] = ctx.results;
  json warn = json::array();
  for (const auto& w : ctx.warnings) warn.push_back(w);
  report["warnings"] = std::move(warn);
  report["wall_time_ms"] = wall_ms;
  return report;
}

struct Flags {
  std::string input;
  int s = -1;
  int depth = -1;
  int horizon = 50;
  double mesh = 0.0;
  std::string norm;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  std::string perturbed;
  double delta = 0.0;
  bool delta_set = false;
  int probes = 50;
};

void add_common_flags(CLI::App* cmd, Flags& fl) {
  cmd->add_option("input", fl.input, "family file (JSON)")->required();
  cmd->add_option("--s", fl.s, "horizon s of the s-measure (default N)");
  cmd->add_option("--depth", fl.depth, "product enumeration depth (default 3N)");
  cmd->add_option("--horizon", fl.horizon, "overshoot search horizon (default 50)");
  cmd->add_option("--mesh", fl.mesh, "sphere grid pitch (default 1/32)");
  cmd->add_option("--norm", fl.norm, "norm override: l1 or linf");
  cmd->add_option("--seed", fl.seed,
                  "seed for diagnostic random sampling; certified results "
                  "never depend on it");
  cmd->add_option("--out", fl.out, "write the report (or, for desync/vertex, "
                                   "the constructed family) to a file");
  cmd->add_option("--csv", fl.csv, "write the per-step profile as CSV (ovm)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path);
  out << content;
}

SystemSpec spec_with_overrides(const std::string& document, const Flags& fl,
                               std::vector<std::string>& warnings) {
  SystemSpec spec = parse_and_validate(document);
  if (fl.s >= 0) spec.horizon_s = fl.s;
  if (fl.depth >= 0) spec.product_depth = fl.depth;
  if (fl.mesh > 0.0) spec.sphere_mesh = fl.mesh;
  if (!fl.norm.empty()) {
    auto n = norm_from_name(fl.norm);
    if (!n) throw ValidationError("norm must be \"l1\" or \"linf\"");
    spec.norm = *n;
  }
  if (spec.horizon_s < spec.family.dimension - 1)
    throw ValidationError("--s must be at least N-1");
  if (spec.product_depth < 1) throw ValidationError("--depth must be >= 1");
  if (!(spec.sphere_mesh > 0.0)) throw ValidationError("--mesh must be positive");
  const int m = std::max(1, static_cast<int>(std::llround(1.0 / spec.sphere_mesh)));
  const double effective = 1.0 / m;
  if (std::abs(effective - spec.sphere_mesh) > 1e-15) {
    warnings.push_back("mesh rounded to 1/" + std::to_string(m));
    spec.sphere_mesh = effective;
  }
  return spec;
}

json base_parameters(const SystemSpec& spec) {
  json p;
  p["dimension"] = spec.family.dimension;
  p["members"] = spec.family.size();
  p["norm"] = norm_name(spec.norm);
  p["s"] = spec.horizon_s;
  p["depth"] = spec.product_depth;
  p["mesh"] = spec.sphere_mesh;
  p["rank_tol"] = spec.tol.rank_tol;
  p["dedup_tol"] = spec.tol.dedup_tol;
  p["lp_tol"] = spec.tol.lp_tol;
  return p;
}

json qcm_to_json(const QcmEstimate& est) {
  json r;
  r["s"] = est.s;
  r["mesh"] = est.mesh;
  r["grid_size"] = est.grid_size;
  r["empirical_inf"] = est.empirical_inf;
  r["certified_lower"] = est.certified_lower;
  r["argmin_point"] = est.argmin_point.size() ? vector_to_json(est.argmin_point)
                                              : json();
  r["lipschitz_M"] = est.lipschitz_M;
  r["covering_radius"] = est.covering_radius;
  return r;
}

json verdict_to_json(const Verdict& v) {
  json c;
  switch (v.status) {
    case Stability::ExponentiallyStable: c["type"] = "norm_bound"; break;
    case Stability::AbsolutelyExponentiallyUnstable:
      c["type"] = "unstable_word";
      break;
    case Stability::MarginalBounded: c["type"] = "closed_semigroup"; break;
    default: c["type"] = json();
  }
  c["depth"] = v.status == Stability::ExponentiallyStable ? json(v.cert_depth) : json();
  c["bound"] = v.status == Stability::ExponentiallyStable ? json(v.cert_bound) : json();
  c["word"] = v.status == Stability::AbsolutelyExponentiallyUnstable
                  ? json(word_to_string(v.cert_word))
                  : json();
  c["spectral_radius"] = v.status == Stability::AbsolutelyExponentiallyUnstable
                             ? json(v.cert_spectral_radius)
                             : json();
  c["qc_flag"] = v.status == Stability::AbsolutelyExponentiallyUnstable
                     ? json(v.qc_flag)
                     : json();
  c["semigroup_size"] =
      v.status == Stability::MarginalBounded ? json(v.semigroup_size) : json();

  json r;
  r["status"] = stability_name(v.status);
  r["jsr_lower"] = v.jsr_lower;
  r["jsr_upper"] = std::isfinite(v.jsr_upper) ? json(v.jsr_upper) : json();
  r["epsilon"] = v.epsilon ? json(*v.epsilon) : json();
  r["mu"] = v.mu ? json(*v.mu) : json();
  r["gamma"] = v.gamma ? json(*v.gamma) : json();
  r["certificate"] = std::move(c);
  json diag = json::array();
  for (const auto& d : v.diagnostics) diag.push_back(d);
  r["diagnostics"] = std::move(diag);
  return r;
}

json bound_report_to_json(const BoundReport& b) {
  json r;
  r["alpha"] = b.alpha;
  r["beta"] = b.beta;
  r["bound"] = b.bound;
  r["applicable"] = b.applicable;
  json reasons = json::array();
  for (const auto& s : b.reasons) reasons.push_back(s);
  r["reasons"] = std::move(reasons);
  return r;
}

int run_command(const std::string& command, const Flags& fl, std::string& out,
                std::string& err) {
  const auto started = std::chrono::steady_clock::now();
  std::string document;
  try {
    document = read_file(fl.input);
  } catch (const std::exception& e) {
    err = e.what();
    return 1;
  }

  CommandContext ctx;
  ctx.command = command;
  ctx.digest = content_digest(document);

  try {
    ctx.spec = spec_with_overrides(document, fl, ctx.warnings);
    const SystemSpec& spec = ctx.spec;
    const MatrixFamily& family = spec.family;
    ctx.parameters = base_parameters(spec);
    std::string family_out;  // desync/vertex constructed family

    if (command == "check") {
      QcVerdict v = qc_check(family, spec);
      json r;
      r["status"] = qc_status_name(v.status);
      r["evidence"] = v.evidence;
      r["certified_qcm_lower"] =
          v.certified_qcm_lower > 0.0 ? json(v.certified_qcm_lower) : json();
      if (v.witness_basis.empty()) {
        r["witness_basis"] = json();
      } else {
        json basis = json::array();
        for (const auto& b : v.witness_basis) basis.push_back(vector_to_json(b));
        r["witness_basis"] = std::move(basis);
      }
      ctx.results = std::move(r);
    } else if (command == "qcm") {
      QcmEstimate est =
          qcm(family, spec.horizon_s, spec.norm, spec.sphere_mesh, spec.tol);
      ctx.results = qcm_to_json(est);
    } else if (command == "ovm") {
      ctx.parameters["horizon"] = fl.horizon;
      const bool exact_profile = !fl.csv.empty();
      OvmEstimate est =
          ovm_empirical(family, fl.horizon, spec.norm, spec.tol, exact_profile);
      json r;
      r["horizon"] = est.horizon;
      r["lower_bound"] = est.lower_bound;
      r["witness_t"] = est.witness_t;
      r["witness_word"] = word_to_string(est.witness_word);
      r["profile_exact"] = est.profile_exact;
      ctx.results = std::move(r);
      if (!fl.csv.empty()) {
        std::ostringstream csv;
        csv << "t,max_norm,word\n";
        for (size_t t = 0; t < est.level_max.size(); ++t) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", est.level_max[t]);
          csv << t << ',' << buf << ',' << word_to_string(est.level_witness[t])
              << '\n';
        }
        write_file(fl.csv, csv.str());
      }
    } else if (command == "bound") {
      json r;
      try {
        TransientBound tb = transient_bound(family, spec);
        r["status"] = "certified";
        r["reason"] = json();
        r["qcm_lower"] = tb.qcm_lower;
        r["bound"] = tb.bound;
        r["certificate"] = verdict_to_json(tb.certificate);
        r["measure"] = qcm_to_json(tb.measure);
      } catch (const NotApplicable& e) {
        r["status"] = "not_applicable";
        r["reason"] = e.what();
        r["qcm_lower"] = json();
        r["bound"] = json();
        r["certificate"] = json();
        r["measure"] = json();
      } catch (const DegenerateMeasure& e) {
        r["status"] = "degenerate_measure";
        r["reason"] = e.what();
        r["qcm_lower"] = json();
        r["bound"] = json();
        r["certificate"] = json();
        r["measure"] = json();
      }
      ctx.results = std::move(r);
    } else if (command == "classify") {
      Verdict v = classify(family, spec);
      ctx.results = verdict_to_json(v);
    } else if (command == "desync" || command == "vertex") {
      if (family.size() > 1)
        ctx.warnings.push_back(
            "input has several members; the first is used as the base matrix");
      const Matrix& a = family.members.front();
      MatrixFamily constructed =
          command == "desync" ? desync_family(a) : vertex_family(a);
      BoundReport br = command == "desync" ? desync_qcm_bound(a, Norm::L1)
                                           : vertex_qcm_bound(a, Norm::L1);
      if (spec.norm != Norm::L1)
        ctx.warnings.push_back(
            "analytic bound is stated for the L1 norm; reported in L1");
      json r = bound_report_to_json(br);
      r["family"] = family_to_json(constructed, spec.norm);
      ctx.results = std::move(r);
      family_out = family_to_document(constructed, spec.norm);
    } else if (command == "perturb") {
      ctx.parameters["probes"] = fl.probes;
      std::vector<Matrix> deltas;
      if (!fl.perturbed.empty() && fl.delta_set)
        throw ValidationError("--perturbed and --delta are mutually exclusive");
      if (!fl.perturbed.empty()) {
        SystemSpec other = parse_and_validate(read_file(fl.perturbed));
        if (other.family.dimension != family.dimension ||
            other.family.size() != family.size())
          throw ValidationError("perturbed family must be index-paired");
        for (int i = 0; i < family.size(); ++i)
          deltas.push_back(other.family.members[static_cast<size_t>(i)] -
                           family.members[static_cast<size_t>(i)]);
      } else if (fl.delta_set) {
        // deterministic alternating-sign pattern scaled by --delta
        for (int k = 0; k < family.size(); ++k) {
          Matrix d(family.dimension, family.dimension);
          for (int i = 0; i < family.dimension; ++i)
            for (int j = 0; j < family.dimension; ++j)
              d(i, j) = ((i + j + k) % 2 == 0 ? 1.0 : -1.0) * fl.delta;
          deltas.push_back(std::move(d));
        }
      } else {
        throw ValidationError("perturb needs --perturbed FILE or --delta VALUE");
      }
      PerturbReport rep = qcm_perturbation_check(family, deltas, spec, fl.probes);
      json r;
      r["s"] = spec.horizon_s;
      r["rho_s_bound"] = rep.rho_s_bound;
      r["lipschitz_ok"] = rep.lipschitz_ok;
      double max_delta = 0.0;
      json points = json::array();
      for (const auto& c : rep.per_point_checks) {
        max_delta = std::max(max_delta, c.delta);
        json p;
        p["x"] = vector_to_json(c.x);
        p["rho_base"] = c.rho_base;
        p["rho_perturbed"] = c.rho_perturbed;
        p["delta"] = c.delta;
        points.push_back(std::move(p));
      }
      r["max_point_delta"] = max_delta;
      r["qc_preservation_applicable"] = rep.qc_preservation_applicable;
      r["qc_preserved"] = rep.qc_preservation_applicable ? json(rep.qc_preserved)
                                                         : json();
      json base;
      base["empirical_inf"] = rep.base_qcm.empirical_inf;
      base["certified_lower"] = rep.base_qcm.certified_lower;
      json pert;
      pert["empirical_inf"] = rep.perturbed_qcm.empirical_inf;
      pert["certified_lower"] = rep.perturbed_qcm.certified_lower;
      r["base"] = std::move(base);
      r["perturbed"] = std::move(pert);
      r["per_point_checks"] = std::move(points);
      ctx.results = std::move(r);
    } else {
      err = "unknown command";
      return 1;
    }

    const auto elapsed = std::chrono::steady_clock::now() - started;
    const std::int64_t wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    const std::string report = dump_report(assemble(ctx, wall_ms));
    if (command == "desync" || command == "vertex") {
      if (!fl.out.empty()) write_file(fl.out, family_out);
      out = report;
    } else if (!fl.out.empty()) {
      write_file(fl.out, report);
    } else {
      out = report;
    }
    return 0;
  } catch (const SyntaxError& e) {
    err = std::string("input error: ") + e.what();
    return 2;
  } catch (const ValidationError& e) {
    err = std::string("validation error: ") + e.what();
    return 2;
  } catch (const Error& e) {
    err = std::string("analysis failed: ") + e.what();
    return 1;
  } catch (const std::exception& e) {
    err = e.what();
    return 1;
  }
}

}  // namespace

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"switched linear system analyzer"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"check",    "qcm",    "ovm",
                                             "bound",    "classify", "desync",
                                             "vertex",   "perturb"};
  const std::vector<std::string> descriptions = {
      "decide quasi-controllability with a certificate",
      "bracket the quasi-controllability measure on a sphere grid",
      "empirical overshooting measure over product words",
      "a-priori transient bound 1 / certified qcm lower bound",
      "stability trichotomy with certificates",
      "build the desynchronized family of a base matrix",
      "build the vertex family of a base matrix",
      "perturbation experiment for the measure's robustness"};

  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    add_common_flags(sub, flags[i]);
    if (commands[i] == "perturb") {
      sub->add_option("--perturbed", flags[i].perturbed,
                      "index-paired perturbed family file");
      sub->add_option("--delta", flags[i].delta,
                      "entrywise perturbation magnitude (alternating signs)")
          ->each([&flags, i](const std::string&) { flags[i].delta_set = true; });
      sub->add_option("--probes", flags[i].probes,
                      "number of deterministic sphere probes");
    }
    subs.push_back(sub);
  }

  CliResult result;
  std::vector<const char*> argv;
  argv.push_back("qcs");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    result.exit_code = 0;
    return result;
  } catch (const CLI::ParseError& e) {
    result.err = e.what();
    result.exit_code = 1;
    return result;
  }

  for (size_t i = 0; i < commands.size(); ++i) {
    if (subs[i]->parsed()) {
      result.exit_code =
          run_command(commands[i], flags[i], result.out, result.err);
      return result;
    }
  }
  result.err = "no command given";
  result.exit_code = 1;
  return result;
}

}  // namespace qcs
