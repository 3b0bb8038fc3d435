// Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qoct/analysis.hpp"
#include "qoct/cli.hpp"
#include "qoct/functional.hpp"
#include "qoct/gradient.hpp"
#include "qoct/optimizer.hpp"

using namespace qoct;
using namespace qoct::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

ControlField noisy(const ControlField& base, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  return ControlField(base.samples() + random_field(base.size(), rng, amplitude).samples());
}

void gradient_oracle() {
  const auto start = Clock::now();
  const Index dims[] = {2, 3, 4};
  const Index steps[] = {50, 100, 200};
  const double alphas[] = {0.1, 1.0, 10.0};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ControlProblem p =
        random_problem(dims[i % 3], steps[(i / 3) % 3], alphas[(i + i / 3) % 3], 1000 + i);
    const ControlField field = noisy(p.eps_ref, 2000 + i, 0.5);
    worst = std::max(worst, gradient_report(p, field, 1e-5).max_rel_error);
  }
  const double elapsed = seconds_since(start);
  report(1, "gradient oracle", worst < 1e-6 && elapsed < 30.0,
         fmt("max relative error %.3e (< 1e-6) over 10 problems, %.2f s (< 30 s)", worst,
             elapsed));
}

void canonical_discontinuity() {
  double match = 0.0, jump_mismatch = 0.0, min_jump = 1e300;
  bool plus_zero = true, jumps_when_sourced = true;
  for (int i = 0; i < 10; ++i) {
    const ControlProblem p = random_problem(2 + i % 3, 60, 1.0, 3000 + i);
    const Solution sol = solve(p, noisy(p.eps_ref, 3100 + i, 0.5));
    const ContinuityReport r = check_canonical_jump(sol);
    const double source = (p.observable.matrix() * sol.psi[p.grid.index_T()]).norm();
    match = std::max(match, r.costate_matches_O_psi);
    jump_mismatch = std::max(jump_mismatch, std::abs(r.jump_norm_at_T - source));
    plus_zero = plus_zero && sol.chi.chi_T_plus.isZero(0.0);
    if (source > 0.0) jumps_when_sourced = jumps_when_sourced && r.jump_norm_at_T > 0.0;
    min_jump = std::min(min_jump, r.jump_norm_at_T);
  }
  report(2, "canonical discontinuity",
         match < 1e-12 && plus_zero && jump_mismatch <= 1e-14 && jumps_when_sourced,
         fmt("||chi(T-) - O psi(T)|| max %.2e (< 1e-12), chi(T+) == 0: %s, "
             "| jump - ||O psi(T)|| | max %.2e, smallest jump %.3f over 10 instances",
             match, plus_zero ? "yes" : "no", jump_mismatch, min_jump));
}

void field_continuity() {
  std::mt19937_64 rng(4000);
  double gap = 0.0, post = 0.0;
  bool predicate = true;
  for (int i = 0; i < 10; ++i) {
    const Index n = 2 + i % 3;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(random_hermitian(n, rng));
    const ComplexMatrix& v = eig.eigenvectors();
    auto shared_basis = [&](const RealVector& d) {
      const ComplexMatrix m = v * d.cast<Complex>().asDiagonal() * v.adjoint();
      return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())));
    };
    const HermitianOperator o = shared_basis(RealVector::Random(n));
    const HermitianOperator mu = shared_basis(RealVector::Random(n));
    const ControlHamiltonian h(HermitianOperator(random_hermitian(n, rng)), mu);
    const TimeGrid grid(0.05, 40, 48);
    const ControlField ref = random_field(48, rng, 0.2);
    OptimizationConfig c;
    c.alpha = 1.0;
    c.max_iters = 20;
    c.eps_ref = ref;
    c.initial_field = noisy(ref, 4100 + i, 0.1);
    const StateVector psi0 = random_state(n, rng);
    const OptimizationResult r = optimize(psi0, h, o, grid, c);
    const ControlProblem p{h, o, psi0, grid, ref, 1.0};
    const ContinuityReport cr = check_field_continuity(solve(p, r.final_field));
    predicate = predicate && *cr.commutator_condition_holds;
    gap = std::max(gap, *cr.field_left_limit_gap);
    post = std::max(post, *cr.post_T_field_deviation);
  }

  // Non-commuting pair with psi(T) = (1, i)/sqrt(2): free evolution under H0 = diag(0,1).
  const double s = 1.0 / std::sqrt(2.0);
  const TimeGrid grid(0.1, 8, 10);
  StateVector psi0(2);
  psi0 << s, Complex(0.0, s) * std::polar(1.0, grid.T());
  const ControlProblem p{ControlHamiltonian(HermitianOperator(diag2(0, 1)), sigma_x()),
                         HermitianOperator(diag2(0, 1)), psi0, grid,
                         ControlField::constant(10, 0.0), 1.0};
  const ContinuityReport nc = check_field_continuity(solve(p, p.eps_ref));
  const double nc_error = std::abs(*nc.field_left_limit_gap - 0.5);

  report(3, "field continuity",
         predicate && gap < 1e-10 && post == 0.0 && !*nc.commutator_condition_holds &&
             nc_error < 1e-10,
         fmt("commuting pairs: gap max %.2e (< 1e-10), post-T deviation %.1e; "
             "non-commuting: gap %.12f (0.5 +/- 1e-10)",
             gap, post, *nc.field_left_limit_gap));
}

void continuous_family() {
  double jump = 0.0, residual = 0.0, defect = 0.0;
  for (int i = 0; i < 5; ++i) {
    const ControlProblem p = random_problem(2 + i % 3, 80, 1.0, 5000 + i);
    const ControlField field = noisy(p.eps_ref, 5100 + i, 0.5);
    const StateTrajectory psi = propagate_forward(p.psi0, field, p.hamiltonian, p.grid);
    for (int n : {1, 2, -1}) {
      const ContinuityReport r =
          check_continuous_family(psi, p.observable, field, p.hamiltonian, p.grid, n);
      jump = std::max(jump, r.jump_norm_at_T);
      residual = std::max(residual, *r.homogeneous_tdse_residual);
      defect = std::max(defect, std::abs(*r.phase_defect_jump - 2.0));
    }
  }
  report(4, "continuous family", jump == 0.0 && residual < 1e-12 && defect < 1e-14,
         fmt("n in {1,2,-1}: jump %.1e, homogeneous residual max %.2e (< 1e-12), "
             "| phase defect - 2 | %.1e (< 1e-14)",
             jump, residual, defect));
}

void conjugate_independence() {
  double plain = 0.0, scaled = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ControlProblem p = random_problem(2 + i % 3, 100, 1.0, 6000 + i);
    const ControlField field = noisy(p.eps_ref, 6100 + i, 1.0);
    plain = std::max(plain, check_conjugate_independence(p.psi0, field, p.hamiltonian, p.grid));
    scaled = std::max(scaled, check_conjugate_independence(p.psi0, field, p.hamiltonian, p.grid,
                                                           Complex(0.0, 2.0)));
  }
  report(5, "conjugate independence", plain < 1e-12 && scaled < 1e-12,
         fmt("max ||Phi - beta Psi*||: beta=1 %.2e, beta=2i %.2e (< 1e-12)", plain, scaled));
}

void optimization_benchmark() {
  const ControlProblem p = two_level_benchmark(1.0);
  OptimizationConfig c;
  c.alpha = 1.0;
  c.max_iters = 500;
  c.eps_ref = p.eps_ref;
  c.initial_field = cli::seeded_field(p.eps_ref, cli::kInitialNoise, 7);
  const auto start = Clock::now();
  const OptimizationResult r = optimize(p.psi0, p.hamiltonian, p.observable, p.grid, c);
  const double elapsed = seconds_since(start);
  const bool ok = r.final_fidelity >= 0.99 && r.iterations_run <= 500 && elapsed < 10.0 &&
                  r.final_stationarity_residual < 1e-6 && r.monotonic;
  report(6, "optimization benchmark", ok,
         fmt("j_opt %.6f (>= 0.99), %d iterations (<= 500), %.2f s (< 10 s), "
             "stationarity residual %.2e (< 1e-6), largest J drop %.1e (slack 1e-8)",
             r.final_fidelity, r.iterations_run, elapsed, r.final_stationarity_residual,
             r.max_j_decrease));
}

void numerical_hygiene() {
  // Norm drift over 1e4 steps.
  std::mt19937_64 rng(7000);
  const ControlHamiltonian h(HermitianOperator(random_hermitian(4, rng)),
                             HermitianOperator(random_hermitian(4, rng)));
  const TimeGrid long_grid(0.01, 9990, 10000);
  const StateVector psi0 = random_state(4, rng);
  const StateTrajectory long_traj =
      propagate_forward(psi0, random_field(10000, rng, 1.0), h, long_grid);
  double drift = 0.0;
  for (const auto& s : long_traj.states) drift = std::max(drift, std::abs(s.norm() - 1.0));

  double roundtrip = 0.0, identity = 0.0, tdse = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ControlProblem p = random_problem(2 + i % 3, 100, 1.0, 7100 + i);
    const ControlField field = noisy(p.eps_ref, 7200 + i, 0.5);
    const StepSequence steps = make_steps(p.hamiltonian, field, p.grid);
    for (const auto& st : steps) {
      roundtrip = std::max(roundtrip, (st.apply(st.apply(p.psi0, Direction::Forward),
                                                Direction::Backward) - p.psi0).norm());
    }
    const StateTrajectory psi = propagate_forward(p.psi0, steps);
    for (const CostateBoundary b : {CostateBoundary::canonical(), CostateBoundary::continuous(1)}) {
      const CostateTrajectory chi = propagate_costate(psi, p.observable, steps, p.grid, b);
      const FunctionalBreakdown fb =
          eval_total(psi, chi, field, p.eps_ref, p.alpha, steps, p.observable, p.grid);
      identity = std::max(identity, std::abs(fb.j_total - (fb.j_opt + fb.j_cost + fb.j_tdse)));
      tdse = std::max(tdse, std::abs(fb.j_tdse));
    }
  }
  report(7, "numerical hygiene",
         drift < 1e-11 && roundtrip < 1e-12 && identity <= 1e-14 && tdse < 1e-11,
         fmt("norm drift over 1e4 steps %.2e (< 1e-11), Backward(Forward) %.2e (< 1e-12), "
             "| j_total - sum | %.1e (<= 1e-14), |j_tdse| max %.2e (< 1e-11)",
             drift, roundtrip, identity, tdse));
}

void cli_round_trip() {
  const fs::path configs = fs::path(QOCT_SOURCE_DIR) / "configs";
  const fs::path dir = fs::temp_directory_path() / "qoct_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream diag;

  const fs::path config = configs / "two_level_benchmark.json";
  const int opt_code = cli::run_optimize(config, dir / "opt", std::nullopt, diag);
  const int prop_code = cli::run_propagate(config, dir / "opt" / "field.csv", dir / "prop", diag);
  double diff = 1.0;
  if (prop_code == cli::kSuccess && fs::exists(dir / "opt" / "summary.json")) {
    auto load = [](const fs::path& f) { std::ifstream in(f); return nlohmann::json::parse(in); };
    diff = std::abs(load(dir / "opt" / "summary.json")["final"]["j_opt"].get<double>() -
                    load(dir / "prop" / "summary.json")["final"]["j_opt"].get<double>());
  }

  nlohmann::json base;
  std::ifstream(config) >> base;
  struct Case {
    std::string field;
    nlohmann::json value;
  };
  const Case cases[] = {{"h0", nlohmann::json::parse("[[0, 0.5], [0, 1]]")},
                        {"T_hat", 10.0},
                        {"alpha", 0.0},
                        {"dt", 0.03},
                        {"psi0", nlohmann::json::parse("[1, 1]")}};
  int named = 0;
  for (const Case& c : cases) {
    nlohmann::json doc = base;
    doc[c.field] = c.value;
    const fs::path bad = dir / ("bad_" + c.field + ".json");
    std::ofstream(bad) << doc.dump();
    std::ostringstream err;
    const int code = cli::run_optimize(bad, dir / "bad_out", std::nullopt, err);
    if (code == cli::kInputError && err.str().find("'" + c.field + "'") != std::string::npos) {
      ++named;
    }
  }
  report(8, "cli round trip",
         (opt_code == cli::kSuccess || opt_code == cli::kNotMet) && prop_code == cli::kSuccess &&
             diff < 1e-10 && named == 5,
         fmt("propagate reproduces j_opt to %.1e (< 1e-10); %d/5 malformed configs exit 1 "
             "naming the field",
             diff, named));
}

}  // namespace

int main() {
  gradient_oracle();
  canonical_discontinuity();
  field_continuity();
  continuous_family();
  conjugate_independence();
  optimization_benchmark();
  numerical_hygiene();
  cli_round_trip();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
