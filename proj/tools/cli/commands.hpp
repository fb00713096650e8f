#pragma once

// dce_lab command-line front end. Exit codes: 0 success, 1 domain error,
// 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

#include "dcelab/dynamics.hpp"
#include "dcelab/model.hpp"

namespace dce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:end:step", inclusive of end up to rounding.
[[nodiscard]] std::vector<double> parse_grid(const std::string& text);

/// Worker count: explicit value, else DCE_LAB_JOBS, else hardware threads.
[[nodiscard]] unsigned resolve_jobs(int requested);

struct SimulateRequest {
    ModelConfig config;
    std::string mode = "rwa";  ///< "full" or "rwa"
    double t_end = 0.0;
    IntegrationOptions integration;
    InitialState init;
};

/// Fully resolved integration run; shared by `simulate` and `replay`.
[[nodiscard]] Trajectory run_simulation(const SimulateRequest& request);

}  // namespace dce::cli
