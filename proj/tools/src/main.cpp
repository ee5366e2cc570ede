#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqs/config.hpp"
#include "cqs/propagate.hpp"
#include "commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "declarative config file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--set", args.overrides,
                  "override a config key (key=value, or NAME/key=value for a curve section)");
}

cqs::ExperimentConfig load(const CommonArgs& args) {
  cqs::cfg::Document doc = cqs::cfg::parse_file(args.config_path);
  for (const auto& o : args.overrides) cqs::cfg::apply_override(doc, o);
  return cqs::load_experiment(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bistable-soliton squeezing simulator for the cubic-quintic "
               "nonlinear Schrodinger equation"};
  app.require_subcommand(1);

  CommonArgs family_args, propagate_args, squeeze_args, theta_args, validate_args;
  auto* family = app.add_subcommand("family", "amplitude-pulsewidth family curves and turning points");
  add_common(family, family_args);
  auto* propagate = app.add_subcommand("propagate", "classical propagation with trajectory export");
  add_common(propagate, propagate_args);
  auto* squeeze = app.add_subcommand("squeeze", "optimal squeezing ratio versus distance");
  add_common(squeeze, squeeze_args);
  auto* theta = app.add_subcommand("theta-scan", "squeezing ratio versus local-oscillator phase");
  add_common(theta, theta_args);
  auto* validate = app.add_subcommand("validate", "run the numerical invariant suite");
  add_common(validate, validate_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (family->parsed()) return cqstool::cmd_family(load(family_args));
    if (propagate->parsed()) return cqstool::cmd_propagate(load(propagate_args));
    if (squeeze->parsed()) return cqstool::cmd_squeeze(load(squeeze_args));
    if (theta->parsed()) return cqstool::cmd_theta_scan(load(theta_args));
    if (validate->parsed()) return cqstool::cmd_validate(load(validate_args));
  } catch (const cqs::config_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return cqstool::kExitConfig;
  } catch (const cqs::integration_diverged& err) {
    std::cerr << "integration diverged at z = " << err.z() << ": " << err.what() << "\n";
    return cqstool::kExitDiverged;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return cqstool::kExitConfig;
  } catch (const std::domain_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return cqstool::kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return cqstool::kExitOk;
}
