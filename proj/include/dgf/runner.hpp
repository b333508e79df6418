#ifndef DGF_RUNNER_HPP
#define DGF_RUNNER_HPP

#include "dgf/run_config.hpp"

namespace dgf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitNotConverged = 4;
inline constexpr int kExitIo = 5;

/// Builds the initial state described by the config (fixture, mode lists,
/// seeded perturbations).
FlowState build_initial_state(const RunConfig& config);

/// Executes the configured scenario, writing all outputs under
/// config.out_dir. Returns the process exit code.
int run_scenario(const RunConfig& config);

} // namespace dgf

#endif
