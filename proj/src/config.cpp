#include "qoct/config.hpp"

#include <fstream>

namespace qoct {

using nlohmann::json;

namespace {

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ConfigError(key, "missing");
  return doc.at(key);
}

double read_real(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "not finite");
  return x;
}

Complex read_complex(const json& value, const std::string& field) {
  if (value.is_number()) return {read_real(value, field), 0.0};
  if (value.is_array() && value.size() == 2) {
    return {read_real(value[0], field), read_real(value[1], field)};
  }
  throw ConfigError(field, "expected a complex number [re, im]");
}

ComplexMatrix read_matrix(const json& doc, const std::string& field, Index n) {
  const json& rows = require(doc, field);
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
    throw ConfigError(field, "expected " + std::to_string(n) + " rows");
  }
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw ConfigError(field, "row " + std::to_string(i) + " must have " + std::to_string(n) +
                                   " entries");
    }
    for (Index j = 0; j < n; ++j) m(i, j) = read_complex(row[static_cast<std::size_t>(j)], field);
  }
  return m;
}

HermitianOperator read_hermitian(const json& doc, const std::string& field, Index n) {
  ComplexMatrix m = read_matrix(doc, field, n);
  const double defect = hermiticity_defect(m);
  if (!(defect < HermitianOperator::kTolerance)) {
    throw ConfigError(field, "matrix is not Hermitian (||A - A^dagger||_max = " +
                                 std::to_string(defect) + ")");
  }
  return HermitianOperator(std::move(m));
}

ControlField read_eps_ref(const json& doc, const TimeGrid& grid) {
  const json& spec = require(doc, "eps_ref");
  if (spec.is_number()) return ControlField::constant(grid.n_steps(), read_real(spec, "eps_ref"));
  if (spec.is_object() && spec.contains("constant")) {
    return ControlField::constant(grid.n_steps(), read_real(spec.at("constant"), "eps_ref"));
  }
  if (spec.is_object() && spec.contains("samples")) {
    const json& samples = spec.at("samples");
    if (!samples.is_array() || static_cast<Index>(samples.size()) != grid.n_steps()) {
      throw ConfigError("eps_ref", "samples must list " + std::to_string(grid.n_steps()) +
                                       " values (one per interval)");
    }
    RealVector v(grid.n_steps());
    for (Index k = 0; k < v.size(); ++k) {
      v[k] = read_real(samples[static_cast<std::size_t>(k)], "eps_ref");
    }
    return ControlField(std::move(v));
  }
  throw ConfigError("eps_ref", "expected {\"constant\": x} or {\"samples\": [...]}");
}

SchemeOptions read_scheme(const json& doc) {
  SchemeOptions scheme;
  if (!doc.contains("scheme")) return scheme;
  const json& s = doc.at("scheme");
  if (!s.is_object()) throw ConfigError("scheme", "expected an object");
  if (s.contains("max_iters")) {
    const json& v = s.at("max_iters");
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw ConfigError("scheme.max_iters", "expected a positive integer");
    }
    scheme.max_iters = v.get<int>();
  }
  if (s.contains("j_tol")) {
    scheme.j_tol = read_real(s.at("j_tol"), "scheme.j_tol");
    if (!(scheme.j_tol > 0.0)) throw ConfigError("scheme.j_tol", "must be positive");
  }
  if (s.contains("stationarity_tol")) {
    scheme.stationarity_tol = read_real(s.at("stationarity_tol"), "scheme.stationarity_tol");
    if (!(scheme.stationarity_tol > 0.0)) {
      throw ConfigError("scheme.stationarity_tol", "must be positive");
    }
  }
  if (s.contains("seed")) {
    const json& v = s.at("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("scheme.seed", "expected a non-negative integer");
    }
    scheme.seed = v.get<std::uint64_t>();
  }
  return scheme;
}

CostateBoundary read_boundary(const json& doc) {
  if (!doc.contains("boundary")) return CostateBoundary::canonical();
  const json& b = doc.at("boundary");
  if (b.is_string() && b.get<std::string>() == "canonical") return CostateBoundary::canonical();
  if (b.is_object() && b.contains("continuous")) {
    const json& n = b.at("continuous");
    if (!n.is_number_integer() || n.get<long long>() == 0) {
      throw ConfigError("boundary", "continuous mode needs a nonzero integer n");
    }
    return CostateBoundary::continuous(n.get<int>());
  }
  throw ConfigError("boundary", "expected \"canonical\" or {\"continuous\": n}");
}

}  // namespace

ProblemConfig parse_problem_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");

  const json& dim_value = require(doc, "dimension");
  if (!dim_value.is_number_integer() || dim_value.get<long long>() < 2) {
    throw ConfigError("dimension", "expected an integer >= 2");
  }
  const Index n = dim_value.get<Index>();

  HermitianOperator h0 = read_hermitian(doc, "h0", n);
  HermitianOperator mu = read_hermitian(doc, "mu", n);
  HermitianOperator observable = read_hermitian(doc, "observable", n);

  const json& psi_value = require(doc, "psi0");
  if (!psi_value.is_array() || static_cast<Index>(psi_value.size()) != n) {
    throw ConfigError("psi0", "expected " + std::to_string(n) + " amplitudes");
  }
  StateVector psi0(n);
  for (Index i = 0; i < n; ++i) psi0[i] = read_complex(psi_value[static_cast<std::size_t>(i)], "psi0");
  if (!is_normalized(psi0)) {
    throw ConfigError("psi0", "state is not normalized (norm " + std::to_string(psi0.norm()) + ")");
  }

  const double T = read_real(require(doc, "T"), "T");
  const double T_hat = read_real(require(doc, "T_hat"), "T_hat");
  const double dt = read_real(require(doc, "dt"), "dt");
  if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(T > 0.0)) throw ConfigError("T", "must be positive");
  if (!(T_hat > T)) throw ConfigError("T_hat", "must exceed T");
  TimeGrid grid = [&] {
    try {
      return make_grid(T, T_hat, dt);
    } catch (const GridError& e) {
      throw ConfigError("dt", e.what());
    }
  }();

  const double alpha = read_real(require(doc, "alpha"), "alpha");
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive");

  ControlField eps_ref = read_eps_ref(doc, grid);

  return ProblemConfig{
      ControlProblem{ControlHamiltonian(std::move(h0), std::move(mu)), std::move(observable),
                     std::move(psi0), grid, std::move(eps_ref), alpha},
      read_scheme(doc), read_boundary(doc)};
}

ProblemConfig load_problem_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem_config(doc);
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const StateVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qoct
