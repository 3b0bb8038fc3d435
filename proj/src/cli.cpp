#include "qoct/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "qoct/analysis.hpp"
#include "qoct/functional.hpp"
#include "qoct/gradient.hpp"
#include "qoct/optimizer.hpp"

namespace qoct::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

std::string field_csv(const ControlField& field, const TimeGrid& grid) {
  std::ostringstream out;
  out << "t,eps\n";
  for (Index k = 0; k < field.size(); ++k) {
    out << format_double(grid.time(k)) << ',' << format_double(field[k]) << '\n';
  }
  return out.str();
}

std::string populations_csv(const StateTrajectory& psi, const TimeGrid& grid) {
  std::ostringstream out;
  out << 't';
  const Index levels = psi[0].size();
  for (Index i = 0; i < levels; ++i) out << ",p" << i;
  out << '\n';
  for (Index k = 0; k < psi.size(); ++k) {
    out << format_double(grid.time(k));
    for (Index i = 0; i < levels; ++i) out << ',' << format_double(std::norm(psi[k][i]));
    out << '\n';
  }
  return out.str();
}

json breakdown_json(const FunctionalBreakdown& b) {
  return {{"j_opt", b.j_opt}, {"j_cost", b.j_cost}, {"j_tdse", b.j_tdse}, {"j_total", b.j_total}};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json report_json(const ContinuityReport& r) {
  return {{"jump_norm_at_T", r.jump_norm_at_T},
          {"costate_matches_O_psi", r.costate_matches_O_psi},
          {"field_left_limit_gap", optional_json(r.field_left_limit_gap)},
          {"field_left_limit", optional_json(r.field_left_limit)},
          {"field_right_limit", optional_json(r.field_right_limit)},
          {"post_T_field_deviation", optional_json(r.post_T_field_deviation)},
          {"commutator_condition_holds", optional_json(r.commutator_condition_holds)},
          {"homogeneous_tdse_residual", optional_json(r.homogeneous_tdse_residual)},
          {"phase_defect_jump", optional_json(r.phase_defect_jump)}};
}

json vector_json(const RealVector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json gradient_json(const GradientReport& r) {
  return {{"probe_step", r.probe_step},
          {"max_rel_error", r.max_rel_error},
          {"analytic", vector_json(r.analytic)},
          {"finite_diff", vector_json(r.finite_diff)}};
}

json boundary_json(const CostateBoundary& b) {
  if (b.is_canonical()) return "canonical";
  return {{"continuous", b.winding()}};
}

// Noise on samples before T only; later samples stay on eps_ref as the
// canonical field law requires there.
ControlField probe_field(const ControlProblem& problem, std::uint64_t seed) {
  const ControlField noisy = seeded_field(problem.eps_ref, kProbeAmplitude, seed);
  RealVector v = problem.eps_ref.samples();
  v.head(problem.grid.index_T()) = noisy.samples().head(problem.grid.index_T());
  return ControlField(std::move(v));
}

// Shared wrapper: config and filesystem errors become exit code 1.
template <typename Body>
int guarded(std::ostream& diag, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    diag << "error: " << e.what() << '\n';
    return kInputError;
  }
}

void prepare_out_dir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error("cannot create output directory " + out_dir.string());
  }
}

}  // namespace

ControlField seeded_field(const ControlField& eps_ref, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  RealVector v = eps_ref.samples();
  for (Index k = 0; k < v.size(); ++k) v[k] += noise(rng);
  return ControlField(std::move(v));
}

ControlField read_field_csv(const fs::path& path, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("field", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,eps") {
    throw ConfigError("field", "expected header 't,eps'");
  }
  std::vector<double> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("field", "malformed row '" + line + "'");
    double t = 0.0;
    double eps = 0.0;
    try {
      t = std::stod(line.substr(0, comma));
      eps = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("field", "malformed row '" + line + "'");
    }
    const Index k = static_cast<Index>(samples.size());
    if (std::abs(t - grid.time(k)) > 1e-9 * std::max(1.0, std::abs(t))) {
      throw ConfigError("field", "row " + std::to_string(k) + " has t = " + format_double(t) +
                                     ", grid expects " + format_double(grid.time(k)));
    }
    samples.push_back(eps);
  }
  if (static_cast<Index>(samples.size()) != grid.n_steps()) {
    throw ConfigError("field", "has " + std::to_string(samples.size()) + " samples, grid needs " +
                                   std::to_string(grid.n_steps()));
  }
  try {
    return ControlField(Eigen::Map<const RealVector>(samples.data(), grid.n_steps()));
  } catch (const NonFiniteValue&) {
    throw ConfigError("field", "non-finite sample");
  }
}

int run_optimize(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed, std::ostream& diag) {
  return guarded(diag, [&] {
    const ProblemConfig config = load_problem_config(config_path);
    const ControlProblem& problem = config.problem;
    prepare_out_dir(out_dir);

    OptimizationConfig opt;
    opt.alpha = problem.alpha;
    opt.max_iters = config.scheme.max_iters;
    opt.j_tol = config.scheme.j_tol;
    opt.stationarity_tol = config.scheme.stationarity_tol;
    opt.eps_ref = problem.eps_ref;
    opt.initial_field =
        seeded_field(problem.eps_ref, kInitialNoise, seed.value_or(config.scheme.seed));

    const OptimizationResult result =
        optimize(problem.psi0, problem.hamiltonian, problem.observable, problem.grid, opt);
    const StepSequence steps = make_steps(problem.hamiltonian, result.final_field, problem.grid);
    const StateTrajectory psi = propagate_forward(problem.psi0, steps);

    json history = json::array();
    std::ostringstream history_csv;
    history_csv << "iteration,j_opt,j_cost,j_tdse,j_total\n";
    for (std::size_t i = 0; i < result.j_history.size(); ++i) {
      const auto& b = result.j_history[i];
      json entry = breakdown_json(b);
      entry["iteration"] = i;
      history.push_back(std::move(entry));
      history_csv << i << ',' << format_double(b.j_opt) << ',' << format_double(b.j_cost) << ','
                  << format_double(b.j_tdse) << ',' << format_double(b.j_total) << '\n';
    }

    json summary = {{"command", "optimize"},
                    {"converged", result.converged},
                    {"iterations_run", result.iterations_run},
                    {"final_fidelity", result.final_fidelity},
                    {"final_stationarity_residual", result.final_stationarity_residual},
                    {"monotonic", result.monotonic},
                    {"max_j_decrease", result.max_j_decrease},
                    {"tdse_residual", tdse_residual(psi.states, steps)},
                    {"final", breakdown_json(result.j_history.back())},
                    {"history", std::move(history)}};

    write_atomic(out_dir / "field.csv", field_csv(result.final_field, problem.grid));
    write_atomic(out_dir / "populations.csv", populations_csv(psi, problem.grid));
    write_atomic(out_dir / "history.csv", history_csv.str());
    write_json(out_dir / "summary.json", summary);

    if (!result.converged) {
      diag << "optimize: not converged after " << result.iterations_run
           << " iterations (stationarity residual "
           << format_double(result.final_stationarity_residual) << ")\n";
      return static_cast<int>(kNotMet);
    }
    return static_cast<int>(kSuccess);
  });
}

int run_verify(const fs::path& config_path, const fs::path& out_dir,
               std::optional<std::uint64_t> seed, std::ostream& diag) {
  return guarded(diag, [&] {
    const ProblemConfig config = load_problem_config(config_path);
    const ControlProblem& problem = config.problem;
    prepare_out_dir(out_dir);

    const ControlField field = probe_field(problem, seed.value_or(config.scheme.seed));
    const Solution canonical = solve(problem, field);
    const ContinuityReport jump = check_canonical_jump(canonical);
    const ContinuityReport continuity = check_field_continuity(canonical);
    const Index m = problem.grid.index_T();
    const double source_norm = (problem.observable.matrix() * canonical.psi[m]).norm();

    json checks = json::object();
    checks["canonical_costate_matches_O_psi"] = jump.costate_matches_O_psi < 1e-12;
    checks["canonical_chi_T_plus_zero"] = canonical.chi.chi_T_plus.isZero(0.0);
    checks["canonical_jump_equals_O_psi_norm"] =
        std::abs(jump.jump_norm_at_T - source_norm) <= 1e-12;
    checks["field_right_limit_is_reference"] = *continuity.post_T_field_deviation == 0.0;
    if (*continuity.commutator_condition_holds) {
      checks["field_left_limit_gap"] = *continuity.field_left_limit_gap < 1e-10;
    }

    json family = json::array();
    for (int n : {1, 2, -1}) {
      const ContinuityReport r = check_continuous_family(
          canonical.psi, problem.observable, field, problem.hamiltonian, problem.grid, n);
      json entry = report_json(r);
      entry["n"] = n;
      family.push_back(std::move(entry));
      const std::string tag = "continuous_n" + std::to_string(n);
      checks[tag + "_zero_jump"] = r.jump_norm_at_T == 0.0;
      checks[tag + "_matches_source"] = r.costate_matches_O_psi < 1e-12;
      checks[tag + "_homogeneous"] = *r.homogeneous_tdse_residual < 1e-12;
      checks[tag + "_phase_defect"] = std::abs(*r.phase_defect_jump - 2.0) < 1e-14;
    }

    const double conj_plain =
        check_conjugate_independence(problem.psi0, field, problem.hamiltonian, problem.grid);
    const double conj_scaled = check_conjugate_independence(
        problem.psi0, field, problem.hamiltonian, problem.grid, Complex(0.0, 2.0));
    checks["conjugate_independence"] = conj_plain < 1e-12;
    checks["conjugate_independence_beta_2i"] = conj_scaled < 1e-12;

    const GradientReport gradient = gradient_report(problem, field, kDefaultProbeStep);
    checks["gradient"] = gradient.max_rel_error < 1e-6;

    bool passed = true;
    for (const auto& [name, ok] : checks.items()) {
      if (!ok.get<bool>()) {
        passed = false;
        diag << "verify: check '" << name << "' failed\n";
      }
    }

    json doc = {{"command", "verify"},
                {"boundary", boundary_json(config.boundary)},
                {"canonical_jump", report_json(jump)},
                {"field_continuity", report_json(continuity)},
                {"continuous_family", std::move(family)},
                {"conjugate_independence", {{"beta_1", conj_plain}, {"beta_2i", conj_scaled}}},
                {"gradient", {{"probe_step", gradient.probe_step},
                              {"max_rel_error", gradient.max_rel_error}}},
                {"checks", std::move(checks)},
                {"passed", passed}};
    write_json(out_dir / "verify.json", doc);
    return static_cast<int>(passed ? kSuccess : kNotMet);
  });
}

int run_gradcheck(const fs::path& config_path, const fs::path& out_dir, double h,
                  std::optional<std::uint64_t> seed, std::ostream& diag) {
  return guarded(diag, [&] {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h", "probe step must be positive");
    const ProblemConfig config = load_problem_config(config_path);
    const ControlProblem& problem = config.problem;
    prepare_out_dir(out_dir);

    const ControlField field = probe_field(problem, seed.value_or(config.scheme.seed));
    const GradientReport report = gradient_report(problem, field, h);
    const bool passed = report.max_rel_error < 1e-6;

    json doc = gradient_json(report);
    doc["command"] = "gradcheck";
    doc["passed"] = passed;
    if (!passed) {
      // Halving h cuts O(h^2) truncation error by ~4; round-off error grows instead.
      const GradientReport half = gradient_report(problem, field, 0.5 * h);
      const double ratio = report.max_rel_error / std::max(half.max_rel_error, 1e-300);
      const std::string regime = ratio > 2.5 ? "truncation" : "round-off";
      doc["diagnostics"] = {{"max_rel_error_half_step", half.max_rel_error},
                            {"error_ratio", ratio},
                            {"dominant_error", regime}};
      diag << "gradcheck: max relative error " << format_double(report.max_rel_error)
           << " exceeds 1e-6 (" << regime << "-dominated, error ratio at h/2: "
           << format_double(ratio) << ")\n";
    }
    write_json(out_dir / "grad.json", doc);
    return static_cast<int>(passed ? kSuccess : kNotMet);
  });
}

int run_propagate(const fs::path& config_path, const fs::path& field_path,
                  const fs::path& out_dir, std::ostream& diag) {
  return guarded(diag, [&] {
    const ProblemConfig config = load_problem_config(config_path);
    const ControlProblem& problem = config.problem;
    const ControlField field = read_field_csv(field_path, problem.grid);
    prepare_out_dir(out_dir);

    const StepSequence steps = make_steps(problem.hamiltonian, field, problem.grid);
    const StateTrajectory psi = propagate_forward(problem.psi0, steps);
    const CostateTrajectory chi =
        propagate_costate(psi, problem.observable, steps, problem.grid, config.boundary);
    const FunctionalBreakdown b = eval_total(psi, chi, field, problem.eps_ref, problem.alpha,
                                             steps, problem.observable, problem.grid);
    double norm_drift = 0.0;
    for (const auto& s : psi.states) {
      norm_drift = std::max(norm_drift, std::abs(s.norm() - problem.psi0.norm()));
    }

    json summary = {{"command", "propagate"},
                    {"tdse_residual", tdse_residual(psi.states, steps)},
                    {"norm_drift", norm_drift},
                    {"final", breakdown_json(b)},
                    {"costate", {{"boundary", boundary_json(config.boundary)},
                                 {"jump_norm_at_T", (chi.chi_T_plus - chi.chi_T_minus).norm()}}}};
    write_atomic(out_dir / "populations.csv", populations_csv(psi, problem.grid));
    write_json(out_dir / "summary.json", summary);
    return static_cast<int>(kSuccess);
  });
}

}  // namespace qoct::cli
