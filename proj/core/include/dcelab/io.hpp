#pragma once

// File formats: the key-value model configuration, the JSON term listing,
// and the trajectory / sweep CSV schemas. Reals are written with 17
// significant digits so files are byte-stable across runs.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dcelab/dynamics.hpp"
#include "dcelab/expansion.hpp"
#include "dcelab/model.hpp"
#include "dcelab/stability.hpp"

namespace dce::io {

/// Parse failure carrying a "source:line: key 'x': ..." diagnostic.
class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Keys: k_modes, n_order, epsilon, omega1, kappa (one value or a comma
/// list), drive_omega (number or "resonant"). '#' starts a comment.
[[nodiscard]] ModelConfig parse_config(std::istream& in, const std::string& source = "<config>");
[[nodiscard]] ModelConfig load_config(const std::string& path);
[[nodiscard]] std::string format_config(const ModelConfig& config);

[[nodiscard]] std::string format_real(double value);

/// Strict decimal parse of a whole string.
[[nodiscard]] double parse_real(std::string_view text);

/// Term listing as JSON: config, damping, and one record per term with
/// exact "p/q" coefficient strings.
[[nodiscard]] std::string terms_to_json(const TermSystem& system);
[[nodiscard]] TermSystem terms_from_json(std::string_view text);

/// Header t,re_a1,im_a1,...,re_ak,im_ak,n1,...,nk.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

struct TrajectoryTable {
    std::vector<double> times;
    std::vector<std::vector<double>> photons;  ///< [mode][sample]
    int modes = 0;
};

/// Reads the trajectory schema back; throws ParseError on a header mismatch.
[[nodiscard]] TrajectoryTable read_trajectory_csv(std::istream& in, const std::string& source = "<csv>");

/// Header epsilon,ratio,lambda_max,unstable.
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

}  // namespace dce::io
