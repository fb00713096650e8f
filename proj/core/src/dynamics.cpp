#include "dcelab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace dce {

using cplx = std::complex<double>;

InitialState InitialState::seeded(int modes, double deviation) {
    if (modes < 1) {
        throw std::invalid_argument("need at least one mode");
    }
    InitialState s;
    s.amplitudes.assign(static_cast<std::size_t>(modes), cplx{});
    s.amplitudes.front() = deviation;
    return s;
}

std::vector<cplx> InitialState::stacked() const {
    std::vector<cplx> v(amplitudes);
    for (const auto& a : amplitudes) {
        v.push_back(std::conj(a));
    }
    return v;
}

std::vector<double> output_grid(double t_end, std::size_t samples) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument(fmt::format("t_end must be positive and finite (got {})", t_end));
    }
    if (samples < 2) {
        throw std::invalid_argument("need at least two output samples");
    }
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        grid[i] = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    grid.back() = t_end;
    return grid;
}

namespace {

void record(Trajectory& traj, double t, std::span<const cplx> v, int modes) {
    traj.times.push_back(t);
    std::vector<cplx> amp(v.begin(), v.begin() + modes);
    std::vector<cplx> conj_row(v.begin() + modes, v.begin() + 2 * modes);
    std::vector<double> photons(static_cast<std::size_t>(modes));
    for (int i = 0; i < modes; ++i) {
        photons[static_cast<std::size_t>(i)] = std::norm(amp[static_cast<std::size_t>(i)]);
    }
    traj.amplitudes.push_back(std::move(amp));
    traj.conjugate_channel.push_back(std::move(conj_row));
    traj.photon_proxy.push_back(std::move(photons));
}

void check_init(const InitialState& init, int modes) {
    if (static_cast<int>(init.amplitudes.size()) != modes) {
        throw std::invalid_argument(
            fmt::format("initial state has {} amplitudes for {} modes", init.amplitudes.size(), modes));
    }
}

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

double inf_norm(std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

Trajectory integrate_full(const TermSystem& system, const InitialState& init, double t_end,
                          const IntegrationOptions& options) {
    const TimeDependentSystem rhs(system);
    const int k = rhs.modes();
    const auto n = static_cast<std::size_t>(rhs.dim());
    check_init(init, k);
    if (!(options.rtol > 0.0)) {
        throw std::invalid_argument("rtol must be positive");
    }
    const auto grid = output_grid(t_end, options.samples);

    Trajectory traj;
    auto y = init.stacked();
    record(traj, 0.0, y, k);

    const double fastest = rhs.fastest_rate();
    const double h_max = fastest > 0.0 ? 1.0 / fastest : t_end;
    double h = std::min(h_max, t_end) * 0.1;
    double t = 0.0;

    std::array<std::vector<cplx>, 7> stage;
    for (auto& s : stage) {
        s.assign(n, cplx{});
    }
    std::vector<cplx> tmp(n), y_new(n), err(n);
    rhs.apply(t, y, stage[0]);
    traj.stats.rhs_evaluations = 1;

    auto combine = [&](double hh, std::initializer_list<std::pair<int, double>> weights) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (const auto& [s, w] : weights) {
                acc += w * stage[static_cast<std::size_t>(s)][i];
            }
            tmp[i] = y[i] + hh * acc;
        }
    };

    std::size_t next_sample = 1;
    while (next_sample < grid.size()) {
        if (traj.stats.steps + traj.stats.rejected >= options.max_steps) {
            throw IntegrationError(fmt::format("step budget of {} exhausted at t = {} (fastest phase rate {})",
                                               options.max_steps, t, fastest));
        }
        const double target = grid[next_sample];
        bool hits_sample = false;
        double step = h;
        if (t + step >= target) {
            step = target - t;
            hits_sample = true;
        }
        if (step <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            throw IntegrationError(fmt::format("step size underflow at t = {} (h = {}, fastest phase rate {})", t,
                                               step, fastest));
        }

        combine(step, {{0, a21}});
        rhs.apply(t + c2 * step, tmp, stage[1]);
        combine(step, {{0, a31}, {1, a32}});
        rhs.apply(t + c3 * step, tmp, stage[2]);
        combine(step, {{0, a41}, {1, a42}, {2, a43}});
        rhs.apply(t + c4 * step, tmp, stage[3]);
        combine(step, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
        rhs.apply(t + c5 * step, tmp, stage[4]);
        combine(step, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
        rhs.apply(t + step, tmp, stage[5]);
        combine(step, {{0, b1}, {2, b3}, {3, b4}, {4, b5}, {5, b6}});
        y_new = tmp;
        rhs.apply(t + step, y_new, stage[6]);
        traj.stats.rhs_evaluations += 6;

        for (std::size_t i = 0; i < n; ++i) {
            err[i] = step * (e1 * stage[0][i] + e3 * stage[2][i] + e4 * stage[3][i] + e5 * stage[4][i] +
                             e6 * stage[5][i] + e7 * stage[6][i]);
        }
        // Linear dynamics: measure the error against the whole state.
        const double state_norm = std::max(inf_norm(y), inf_norm(y_new));
        const double scale = options.atol + options.rtol * state_norm;
        double err_rms = 0.0;
        for (const auto& e : err) {
            err_rms += std::norm(e);
        }
        err_rms = std::sqrt(err_rms / static_cast<double>(n));
        const double err_norm = err_rms == 0.0 ? 0.0 : err_rms / scale;
        if (!std::isfinite(err_norm)) {
            throw IntegrationError(fmt::format("non-finite error estimate at t = {} (fastest phase rate {})", t,
                                               fastest));
        }

        const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        if (err_norm <= 1.0) {
            t = hits_sample ? target : t + step;
            y.swap(y_new);
            stage[0].swap(stage[6]);  // FSAL
            ++traj.stats.steps;
            if (state_norm > 0.0) {
                const double local = inf_norm(err) / state_norm;
                traj.stats.max_local_error = std::max(traj.stats.max_local_error, local);
                traj.stats.accumulated_error += local;
            }
            if (hits_sample) {
                record(traj, t, y, k);
                ++next_sample;
                // a clipped step says nothing new about the preferred h
                if (step < h) {
                    continue;
                }
            }
            h = std::min(h_max, step * factor);
        } else {
            ++traj.stats.rejected;
            h = step * std::max(0.2, factor);
        }
    }
    return traj;
}

Trajectory integrate_rwa(const LinearSystem& system, const InitialState& init, double t_end, std::size_t samples) {
    const int k = system.modes;
    check_init(init, k);
    if (system.matrix.rows() != 2 * k || system.matrix.cols() != 2 * k) {
        throw AssemblyError("linear system has inconsistent dimensions");
    }
    const auto grid = output_grid(t_end, samples);
    const auto y0_std = init.stacked();
    const ComplexVector y0 = Eigen::Map<const ComplexVector>(y0_std.data(), static_cast<Eigen::Index>(y0_std.size()));

    Trajectory traj;
    for (double t : grid) {
        const ComplexMatrix propagator = (system.matrix * t).exp();
        const ComplexVector y = propagator * y0;
        record(traj, t, std::span<const cplx>(y.data(), static_cast<std::size_t>(y.size())), k);
    }
    return traj;
}

Trajectory integrate_rwa(const TermSystem& resonant, const InitialState& init, double t_end, std::size_t samples) {
    return integrate_rwa(assemble_linear_system(resonant), init, t_end, samples);
}

double fit_growth_rate(const std::vector<double>& times, const std::vector<double>& photons, FitWindow window) {
    if (times.size() != photons.size()) {
        throw std::invalid_argument("time and photon series differ in length");
    }
    if (!(window.end > window.begin)) {
        throw std::invalid_argument(fmt::format("empty fit window [{}, {}]", window.begin, window.end));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < window.begin || t > window.end) {
            continue;
        }
        if (!(photons[i] > 0.0)) {
            throw std::domain_error(fmt::format(
                "photon proxy is {} at t = {}; move the window past the initial transient", photons[i], t));
        }
        xs.push_back(t);
        ys.push_back(std::log(photons[i]));
    }
    if (xs.size() < 2) {
        throw std::invalid_argument(fmt::format("fit window [{}, {}] holds {} samples; need at least 2",
                                                window.begin, window.end, xs.size()));
    }
    const double cnt = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= cnt;
    mean_y /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    return sxy / sxx;
}

double fit_growth_rate(const Trajectory& trajectory, int mode, FitWindow window) {
    if (mode < 1 || mode > trajectory.modes()) {
        throw std::out_of_range(fmt::format("mode {} outside 1..{}", mode, trajectory.modes()));
    }
    std::vector<double> photons;
    photons.reserve(trajectory.size());
    for (const auto& row : trajectory.photon_proxy) {
        photons.push_back(row[static_cast<std::size_t>(mode - 1)]);
    }
    return fit_growth_rate(trajectory.times, photons, window);
}

}  // namespace dce
