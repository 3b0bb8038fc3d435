#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "qoct/core.hpp"
#include "qoct/problem.hpp"

namespace qoct {

/// Invalid or missing entry in a problem config; field() names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SchemeOptions {
  int max_iters = 500;
  double j_tol = 1e-13;
  double stationarity_tol = 1e-6;
  std::uint64_t seed = 1;
};

struct ProblemConfig {
  ControlProblem problem;
  SchemeOptions scheme;
  CostateBoundary boundary = CostateBoundary::canonical();
};

/// Complex numbers are [re, im] pairs (a bare number is read as real);
/// matrices are arrays of rows.
///
///   { "dimension": 2,
///     "h0": [[0, 0], [0, 1]], "mu": ..., "observable": ...,
///     "psi0": [[1, 0], [0, 0]],
///     "T": 10, "T_hat": 10.5, "dt": 0.025, "alpha": 1,
///     "eps_ref": {"constant": 0} | {"samples": [...]},
///     "scheme": {"max_iters": 500, "j_tol": 1e-13, "stationarity_tol": 1e-6, "seed": 1},
///     "boundary": "canonical" | {"continuous": n} }
ProblemConfig parse_problem_config(const nlohmann::json& doc);
ProblemConfig load_problem_config(const std::filesystem::path& path);

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json vector_to_json(const StateVector& v);

}  // namespace qoct
