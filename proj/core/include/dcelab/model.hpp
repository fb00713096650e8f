#pragma once

// Physical parameters of a one-dimensional cavity with one harmonically
// driven mirror, and the closed-form frequency relations used throughout.
//
// Units: c = hbar = 1 and, by default, omega1 = 1. SI only appears in
// PhysicalEstimate / epsilon_max.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dce {

/// Thrown when a configuration violates a documented precondition.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ModelConfig {
    int k_modes = 3;   ///< retained cavity modes, labeled 1..k
    int n_order = 3;   ///< highest power of epsilon kept
    double epsilon = 0.1;
    double omega1 = 1.0;
    /// Damping rates kappa_i. A single entry applies to every mode.
    std::vector<double> kappa{1e-3};
    /// Mechanical frequency. Empty means "resonant": derived from the
    /// generalized resonance condition at n_order.
    std::optional<double> drive_omega;

    /// Throws ConfigError on invalid fields.
    void validate() const;

    /// Non-fatal remarks, e.g. fewer modes than the expansion order.
    [[nodiscard]] std::vector<std::string> warnings() const;

    /// kappa for mode i (1-based); broadcasts a single entry.
    [[nodiscard]] double kappa_of(int mode) const;

    [[nodiscard]] double shifted_omega1() const;

    /// drive_omega if given, otherwise 2*shifted_omega1()/n_order.
    [[nodiscard]] double drive() const;

    [[nodiscard]] bool resonant_drive() const { return !drive_omega.has_value(); }

    /// Uniform damping from the quality ratio omega1/kappa1.
    void set_ratio(double omega1_over_kappa);

    bool operator==(const ModelConfig&) const = default;
};

/// Mirror position q(t) and its logarithmic velocity qdot/q.
struct MirrorState {
    double position;
    double log_velocity;
};

/// q(t) = L0 exp(eps sin(W t)); qdot/q = eps W cos(W t).
[[nodiscard]] MirrorState mirror_position(double epsilon, double drive_omega, double t, double L0);

/// omega_j = j * omega1 on the unperturbed (equally spaced) spectrum.
[[nodiscard]] double unperturbed_frequency(int mode_index, double omega1);

/// Shifted fundamental frequency from the truncated cosh^2 series:
/// (1/2) [1 + sum_{l=0}^{n} eps^{2l}/(l!)^2] omega1.
[[nodiscard]] double shifted_frequency(double omega1, double epsilon, int n_order);

/// Drive frequency W satisfying shifted_omega1 = (n/2) W.
[[nodiscard]] double resonant_drive(double omega1_shifted, int n_order);

struct CouplingStrengths {
    double linear;     ///< g0^(1) = eps * omega1
    double quadratic;  ///< g0^(2) = eps^2 * omega1 / 2
};

[[nodiscard]] CouplingStrengths coupling_strengths(double epsilon, double omega1);

inline constexpr double kLightSpeed = 2.998e8;  // m/s

struct PhysicalEstimate {
    double cavity_length;  ///< L0 [m]
    double mech_omega;     ///< W [rad/s]
    double light_speed = kLightSpeed;
};

/// Relativistic upper bound on eps: c / (W L0).
[[nodiscard]] double epsilon_max(const PhysicalEstimate& estimate);

}  // namespace dce
