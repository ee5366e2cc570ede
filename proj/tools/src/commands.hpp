#pragma once

#include <string>
#include <vector>

#include "cqs/config.hpp"

namespace cqstool {

// Subcommand entry points; each writes its outputs plus a JSON manifest into
// the configured output directory and returns a process exit code.
int cmd_family(const cqs::ExperimentConfig& cfg);
int cmd_propagate(const cqs::ExperimentConfig& cfg);
int cmd_squeeze(const cqs::ExperimentConfig& cfg);
int cmd_theta_scan(const cqs::ExperimentConfig& cfg);
int cmd_validate(const cqs::ExperimentConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitValidation = 4;

}  // namespace cqstool
