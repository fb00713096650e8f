#pragma once

// Symbolic generation of the epsilon-expanded effective Hamiltonian and
// its Heisenberg equations of motion.
//
// Amplitudes are taken in per-mode rotating frames, A_j = a_j exp(i w~_j t)
// with w~_j = j w~_1, so every term of dA_target/dt carries an integer
// phase pair (m, p) standing for exp(i (m W + p w~_1) t). Coefficients are
// exact; nothing in this module touches floating point except evaluate().

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dcelab/exact.hpp"
#include "dcelab/model.hpp"

namespace dce {

inline constexpr int kMaxExpansionOrder = 6;

struct OperatorRef {
    int mode = 1;
    bool dagger = false;

    [[nodiscard]] OperatorRef adjoint() const { return {mode, !dagger}; }
    auto operator<=>(const OperatorRef&) const = default;
};

/// One term of dA_target/dt:
///   coeff * eps^eps_power * exp(i (harmonic W + slow_phase w~_1) t) * source.
/// A dagger source means conj(A_mode).
struct EomTerm {
    int target = 1;
    OperatorRef source;
    exact::Coefficient coeff;
    int eps_power = 0;
    int harmonic = 0;
    int slow_phase = 0;

    /// The matching term of the adjoint equation for conj(A_target).
    [[nodiscard]] EomTerm conjugate() const;

    /// Sign-free phase test at resonance order n: 2m + p n == 0.
    [[nodiscard]] bool resonant_at(int n_order) const { return 2 * harmonic + slow_phase * n_order == 0; }

    /// Numerical prefactor coeff * eps^eps_power.
    [[nodiscard]] std::complex<double> amplitude(double epsilon, double omega1, double drive_omega) const;

    /// m W + p w~_1.
    [[nodiscard]] double phase_rate(double drive_omega, double omega1_shifted) const {
        return harmonic * drive_omega + slow_phase * omega1_shifted;
    }

    bool operator==(const EomTerm&) const = default;
};

/// Total order used for canonical term lists. Terms equal under this
/// order (same everything but the coefficient value) are merged.
[[nodiscard]] bool term_key_less(const EomTerm& a, const EomTerm& b);

/// Sorts, merges like terms, and drops zero coefficients.
[[nodiscard]] std::vector<EomTerm> canonicalize(std::vector<EomTerm> terms);

struct TermSystem {
    ModelConfig config;
    std::vector<EomTerm> terms;   ///< canonical
    std::vector<double> damping;  ///< -kappa_i/2 on the diagonal, i = 1..k

    [[nodiscard]] int modes() const { return config.k_modes; }
};

// ---------------------------------------------------------------------------
// Expansion families
// ---------------------------------------------------------------------------

/// (-1)^{k+j} 2kj/(j^2-k^2) for k != j, zero on the diagonal.
[[nodiscard]] exact::Rational g_coupling(int k_idx, int j_idx);

/// Fourier coefficients of sin^l x: sin^l x = sum_m c_m exp(i m x).
using Harmonics = std::map<int, exact::GaussianRational>;
[[nodiscard]] Harmonics sin_power_harmonics(int l);

/// omega_k(t)/omega_k0 as a series in x = eps sin(W t): exp(-x) to x^n.
[[nodiscard]] std::vector<exact::Rational> expand_frequency(int n_order);

/// a_k(t) = even(x) a_k0 - odd(x) a_k0^dagger with coefficients
/// x^l / (2^l l!); each list is indexed by l and zero off its parity.
struct OperatorExpansion {
    std::vector<exact::Rational> even;
    std::vector<exact::Rational> odd;
};
[[nodiscard]] OperatorExpansion expand_operator(int n_order);

/// Truncated product of two series.
[[nodiscard]] std::vector<exact::Rational> series_product(std::span<const exact::Rational> a,
                                                          std::span<const exact::Rational> b,
                                                          int max_degree);

// ---------------------------------------------------------------------------
// Hamiltonian and equations of motion
// ---------------------------------------------------------------------------

/// coeff * eps^eps_power * exp(i harmonic W t) * left * right
struct HamiltonianTerm {
    exact::Coefficient coeff;
    int eps_power = 0;
    int harmonic = 0;
    OperatorRef left;
    OperatorRef right;
};

/// Effective Hamiltonian in unperturbed operators, truncated at eps^n.
/// The frequency part is expanded with expand_frequency / expand_operator;
/// the mirror-velocity part is exact at first order because qdot/q is
/// purely harmonic and sqrt(omega_k(t)/omega_j(t)) is time independent.
[[nodiscard]] std::vector<HamiltonianTerm> expand_hamiltonian(const ModelConfig& config);

/// i [H, a_mode] in the laboratory frame (slow_phase = 0).
[[nodiscard]] std::vector<EomTerm> heisenberg_rhs(std::span<const HamiltonianTerm> hamiltonian, int mode);

/// Full rotating-frame term list for dA_i/dt, i = 1..k.
/// Throws ConfigError for k_modes < 1 or n_order outside 1..kMaxExpansionOrder.
[[nodiscard]] TermSystem generate_eom(const ModelConfig& config);

/// Terms of one equation, in canonical order.
[[nodiscard]] std::vector<EomTerm> equation(const TermSystem& system, int target);

/// Human-readable listing of the equations, one term per line.
[[nodiscard]] std::string format_equations(const TermSystem& system);

/// Renders a single term such as "+ eps^3 -1/12 w1 exp(+3iWt) A1^+ exp(+2iw~1t)".
[[nodiscard]] std::string format_term(const EomTerm& term);

}  // namespace dce
