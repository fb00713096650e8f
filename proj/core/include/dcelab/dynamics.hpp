#pragma once

// Time evolution of the first moments <a_i> and the photon-number proxy
// |<a_i>|^2. Time is measured in units of 1/omega1 when omega1 = 1.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dcelab/expansion.hpp"
#include "dcelab/stability.hpp"

namespace dce {

inline constexpr double kDefaultDeviation = 1e-3;
inline constexpr std::size_t kDefaultSamples = 2000;

struct InitialState {
    std::vector<std::complex<double>> amplitudes;  ///< <a_i>(0), i = 1..k

    /// <a_1>(0) = deviation (real), every other mode at rest.
    static InitialState seeded(int modes, double deviation = kDefaultDeviation);

    /// (A, conj(A)) stacked to length 2k.
    [[nodiscard]] std::vector<std::complex<double>> stacked() const;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    double max_local_error = 0.0;    ///< largest accepted local error, relative to the state norm
    double accumulated_error = 0.0;  ///< sum of accepted local errors, relative to the state norm
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<std::complex<double>>> amplitudes;         ///< [sample][mode]
    std::vector<std::vector<std::complex<double>>> conjugate_channel;  ///< integrated conj(A) rows
    std::vector<std::vector<double>> photon_proxy;                     ///< |amplitude|^2
    IntegratorStats stats;

    [[nodiscard]] int modes() const {
        return amplitudes.empty() ? 0 : static_cast<int>(amplitudes.front().size());
    }
    [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct IntegrationOptions {
    double rtol = 1e-10;
    double atol = 1e-300;
    std::size_t samples = kDefaultSamples;
    std::size_t max_steps = 50'000'000;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform output grid of `samples` points on [0, t_end].
[[nodiscard]] std::vector<double> output_grid(double t_end, std::size_t samples);

/// Adaptive Dormand-Prince 5(4) integration of dv/dt = M(t) v over the
/// unfiltered term list. Step size never exceeds 1/fastest_rate so every
/// phase is resolved.
[[nodiscard]] Trajectory integrate_full(const TermSystem& system, const InitialState& init, double t_end,
                                        const IntegrationOptions& options = {});

/// Exact propagation v(t) = expm(M t) v(0) of a constant-coefficient system.
[[nodiscard]] Trajectory integrate_rwa(const LinearSystem& system, const InitialState& init, double t_end,
                                       std::size_t samples = kDefaultSamples);
[[nodiscard]] Trajectory integrate_rwa(const TermSystem& resonant, const InitialState& init, double t_end,
                                       std::size_t samples = kDefaultSamples);

struct FitWindow {
    double begin;
    double end;
};

/// Least-squares slope of ln(photon_proxy[mode]) over samples with
/// begin <= t <= end. Mode is 1-based.
[[nodiscard]] double fit_growth_rate(const Trajectory& trajectory, int mode, FitWindow window);

/// Same fit on raw (t, n) series, used when the data come from a CSV file.
[[nodiscard]] double fit_growth_rate(const std::vector<double>& times, const std::vector<double>& photons,
                                     FitWindow window);

}  // namespace dce
