#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "qoct/config.hpp"

namespace qoct::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  /// Optimizer hit max_iters, or a verification/gradient check missed its tolerance.
  kNotMet = 2,
};

/// Amplitude of the seeded uniform noise added to eps_ref for the optimizer's
/// initial guess.
inline constexpr double kInitialNoise = 1e-2;
/// Amplitude of the seeded probe field used by verify and gradcheck.
inline constexpr double kProbeAmplitude = 0.5;

/// eps_ref + U(-amplitude, amplitude) noise from a seeded generator.
ControlField seeded_field(const ControlField& eps_ref, double amplitude, std::uint64_t seed);

/// Writes field.csv, populations.csv, history.csv and summary.json.
int run_optimize(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed, std::ostream& diag);
/// Writes verify.json.
int run_verify(const std::filesystem::path& config, const std::filesystem::path& out_dir,
               std::optional<std::uint64_t> seed, std::ostream& diag);
/// Writes grad.json.
int run_gradcheck(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                  double h, std::optional<std::uint64_t> seed, std::ostream& diag);
/// Writes populations.csv and summary.json for a field read from CSV.
int run_propagate(const std::filesystem::path& config, const std::filesystem::path& field_csv,
                  const std::filesystem::path& out_dir, std::ostream& diag);

/// Reads a "t,eps" CSV and checks it against the grid.
ControlField read_field_csv(const std::filesystem::path& path, const TimeGrid& grid);

}  // namespace qoct::cli
