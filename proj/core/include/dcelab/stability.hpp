#pragma once

// Resonant filtering, linear-system assembly and eigenvalue analysis of
// the first-moment equations.
//
// State ordering throughout: v = (A_1..A_k, conj(A_1)..conj(A_k)).

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcelab/expansion.hpp"
#include "dcelab/model.hpp"

namespace dce {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Keeps exactly the terms with 2m + p n == 0, i.e. the ones whose phase
/// m W + p w~_1 vanishes identically when w~_1 = (n/2) W.
[[nodiscard]] TermSystem rwa_filter(const TermSystem& system, int n_order);

struct LinearSystem {
    int modes = 0;
    ComplexMatrix matrix;  ///< d v/dt = matrix * v
    ModelConfig config;
    int resonance_order = 0;

    [[nodiscard]] int dim() const { return 2 * modes; }
};

class AssemblyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Constant matrix of a post-RWA system. Throws AssemblyError if any term
/// still carries a nonzero phase at the configured order.
[[nodiscard]] LinearSystem assemble_linear_system(const TermSystem& system);

/// Numerical time-dependent system M(t) for the unfiltered equations.
/// Phases use the configured drive W and the shifted frequency w~_1.
class TimeDependentSystem {
public:
    explicit TimeDependentSystem(const TermSystem& system);

    [[nodiscard]] int dim() const { return 2 * modes_; }
    [[nodiscard]] int modes() const { return modes_; }
    [[nodiscard]] double drive_omega() const { return drive_; }
    [[nodiscard]] double omega1_shifted() const { return shifted_; }

    /// Largest |m W + p w~_1| over all terms.
    [[nodiscard]] double fastest_rate() const { return fastest_; }

    /// dv = M(t) v.
    void apply(double t, std::span<const std::complex<double>> v, std::span<std::complex<double>> dv) const;

    [[nodiscard]] ComplexMatrix matrix_at(double t) const;

private:
    struct Entry {
        int row;
        int col;
        std::complex<double> amplitude;
        int harmonic;
        int slow_phase;
    };
    int modes_ = 0;
    double drive_ = 0.0;
    double shifted_ = 0.0;
    double fastest_ = 0.0;
    int max_harmonic_ = 0;
    int max_slow_ = 0;
    std::vector<double> damping_;
    std::vector<Entry> entries_;
    // scratch for powers of exp(iWt) and exp(iw~t), indexed by offset
    mutable std::vector<std::complex<double>> drive_powers_;
    mutable std::vector<std::complex<double>> slow_powers_;

    void fill_phases(double t) const;
    [[nodiscard]] std::complex<double> phase(const Entry& e) const;
};

struct StabilityResult {
    double lambda_max = 0.0;
    std::vector<std::complex<double>> eigenvalues;  ///< sorted by descending real part
    bool unstable = false;
    double boundary_ratio = 0.0;  ///< omega1/kappa1 where lambda_max crosses zero
};

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All 2k eigenvalues via a dense complex Schur decomposition.
[[nodiscard]] std::vector<std::complex<double>> dense_eigenvalues(const ComplexMatrix& matrix);

/// Closed form for matrices whose only couplings are A_i <-> conj(A_i):
/// blocks [[a, b], [conj(b), conj(a)]] have eigenvalues
/// Re a +- sqrt(|b|^2 - (Im a)^2). Empty if the matrix has other couplings.
[[nodiscard]] std::optional<std::vector<std::complex<double>>> block_eigenvalues(const LinearSystem& ls);

/// Dense solve, cross-checked against block_eigenvalues when that applies.
[[nodiscard]] StabilityResult max_real_eigenvalue(const LinearSystem& ls);

/// omega1/kappa1 = n! / eps^n.
[[nodiscard]] double stability_boundary(int n_order, double epsilon);

/// eps^n omega1 / (2 n!) - kappa1 / 2.
[[nodiscard]] double closed_form_lambda_max(int n_order, double epsilon, double omega1, double kappa1);

struct SweepCell {
    double epsilon = 0.0;
    double ratio = 0.0;
    double lambda_max = 0.0;
    bool unstable = false;
    std::string error;  ///< nonempty if this cell failed
};

struct SweepOptions {
    int k_modes = 0;  ///< 0 means k = n
    double omega1 = 1.0;
    unsigned jobs = 1;
};

/// One cell per (epsilon, ratio), epsilon-major grid order, evaluated by a
/// worker pool. A failing cell is reported in its row; the sweep goes on.
[[nodiscard]] std::vector<SweepCell> sweep_stability(int n_order, std::span<const double> epsilon_grid,
                                                     std::span<const double> ratio_grid,
                                                     const SweepOptions& options = {});

}  // namespace dce
