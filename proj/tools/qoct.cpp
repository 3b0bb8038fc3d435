#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qoct/cli.hpp"
#include "qoct/gradient.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qoct: quantum optimal control with canonical and continuous costates"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string field;
  double h = qoct::kDefaultProbeStep;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "problem config (JSON)")->required();
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--seed", seed, "seed for the initial/probe field (overrides scheme.seed)");
  };

  auto* optimize = app.add_subcommand("optimize", "run the sweep optimizer");
  add_common(optimize);
  auto* verify = app.add_subcommand("verify", "check costate and field continuity claims");
  add_common(verify);
  auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic and finite-difference gradients");
  add_common(gradcheck);
  gradcheck->set_help_flag("--help", "Print this help message and exit");
  gradcheck->add_option("--h", h, "central-difference probe step");
  auto* propagate = app.add_subcommand("propagate", "propagate a given field");
  add_common(propagate);
  propagate->add_option("--field", field, "field CSV (t,eps)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qoct::cli::kInputError;
  }

  if (optimize->parsed()) return qoct::cli::run_optimize(config, out, seed, std::cerr);
  if (verify->parsed()) return qoct::cli::run_verify(config, out, seed, std::cerr);
  if (gradcheck->parsed()) return qoct::cli::run_gradcheck(config, out, h, seed, std::cerr);
  return qoct::cli::run_propagate(config, field, out, std::cerr);
}
