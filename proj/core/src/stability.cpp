#include "dcelab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace dce {

TermSystem rwa_filter(const TermSystem& system, int n_order) {
    TermSystem out;
    out.config = system.config;
    out.damping = system.damping;
    std::copy_if(system.terms.begin(), system.terms.end(), std::back_inserter(out.terms),
                 [n_order](const EomTerm& t) { return t.resonant_at(n_order); });
    return out;
}

namespace {

int column_of(const OperatorRef& op, int modes) { return op.dagger ? modes + op.mode - 1 : op.mode - 1; }

}  // namespace

LinearSystem assemble_linear_system(const TermSystem& system) {
    const auto& cfg = system.config;
    const int k = cfg.k_modes;
    if (static_cast<int>(system.damping.size()) != k) {
        throw AssemblyError(fmt::format("damping has {} entries for {} modes", system.damping.size(), k));
    }
    LinearSystem ls;
    ls.modes = k;
    ls.config = cfg;
    ls.resonance_order = cfg.n_order;
    ls.matrix = ComplexMatrix::Zero(2 * k, 2 * k);
    const double drive = cfg.drive();
    for (int i = 0; i < k; ++i) {
        ls.matrix(i, i) += system.damping[static_cast<std::size_t>(i)];
        ls.matrix(k + i, k + i) += system.damping[static_cast<std::size_t>(i)];
    }
    for (const auto& term : system.terms) {
        if (term.target < 1 || term.target > k || term.source.mode < 1 || term.source.mode > k) {
            throw AssemblyError(fmt::format("term references mode outside 1..{}", k));
        }
        if (!term.resonant_at(cfg.n_order)) {
            throw AssemblyError(fmt::format("term '{}' is not stationary at resonance order {}", format_term(term),
                                            cfg.n_order));
        }
        const auto amp = term.amplitude(cfg.epsilon, cfg.omega1, drive);
        ls.matrix(term.target - 1, column_of(term.source, k)) += amp;
        ls.matrix(k + term.target - 1, column_of(term.source.adjoint(), k)) += std::conj(amp);
    }
    return ls;
}

TimeDependentSystem::TimeDependentSystem(const TermSystem& system)
    : modes_(system.config.k_modes),
      drive_(system.config.drive()),
      shifted_(system.config.shifted_omega1()),
      damping_(system.damping) {
    const auto& cfg = system.config;
    if (static_cast<int>(damping_.size()) != modes_) {
        throw AssemblyError("damping size does not match mode count");
    }
    for (const auto& term : system.terms) {
        const auto amp = term.amplitude(cfg.epsilon, cfg.omega1, drive_);
        if (amp == std::complex<double>{}) {
            continue;
        }
        entries_.push_back({term.target - 1, column_of(term.source, modes_), amp, term.harmonic, term.slow_phase});
        entries_.push_back({modes_ + term.target - 1, column_of(term.source.adjoint(), modes_), std::conj(amp),
                            -term.harmonic, -term.slow_phase});
        max_harmonic_ = std::max(max_harmonic_, std::abs(term.harmonic));
        max_slow_ = std::max(max_slow_, std::abs(term.slow_phase));
        fastest_ = std::max(fastest_, std::abs(term.phase_rate(drive_, shifted_)));
    }
    drive_powers_.resize(static_cast<std::size_t>(2 * max_harmonic_ + 1));
    slow_powers_.resize(static_cast<std::size_t>(2 * max_slow_ + 1));
}

void TimeDependentSystem::fill_phases(double t) const {
    auto fill = [](std::vector<std::complex<double>>& powers, int span, double angle) {
        powers[static_cast<std::size_t>(span)] = 1.0;
        for (int m = 1; m <= span; ++m) {
            // direct evaluation keeps the error independent of |m|
            const auto z = std::polar(1.0, angle * m);
            powers[static_cast<std::size_t>(span + m)] = z;
            powers[static_cast<std::size_t>(span - m)] = std::conj(z);
        }
    };
    fill(drive_powers_, max_harmonic_, drive_ * t);
    fill(slow_powers_, max_slow_, shifted_ * t);
}

std::complex<double> TimeDependentSystem::phase(const Entry& e) const {
    return drive_powers_[static_cast<std::size_t>(max_harmonic_ + e.harmonic)] *
           slow_powers_[static_cast<std::size_t>(max_slow_ + e.slow_phase)];
}

void TimeDependentSystem::apply(double t, std::span<const std::complex<double>> v,
                                std::span<std::complex<double>> dv) const {
    fill_phases(t);
    for (int i = 0; i < modes_; ++i) {
        const auto d = damping_[static_cast<std::size_t>(i)];
        dv[static_cast<std::size_t>(i)] = d * v[static_cast<std::size_t>(i)];
        dv[static_cast<std::size_t>(modes_ + i)] = d * v[static_cast<std::size_t>(modes_ + i)];
    }
    for (const auto& e : entries_) {
        dv[static_cast<std::size_t>(e.row)] += e.amplitude * phase(e) * v[static_cast<std::size_t>(e.col)];
    }
}

ComplexMatrix TimeDependentSystem::matrix_at(double t) const {
    fill_phases(t);
    ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
    for (int i = 0; i < modes_; ++i) {
        m(i, i) = damping_[static_cast<std::size_t>(i)];
        m(modes_ + i, modes_ + i) = damping_[static_cast<std::size_t>(i)];
    }
    for (const auto& e : entries_) {
        m(e.row, e.col) += e.amplitude * phase(e);
    }
    return m;
}

std::vector<std::complex<double>> dense_eigenvalues(const ComplexMatrix& matrix) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(matrix, false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream dump;
        dump << matrix;
        throw EigenSolverError("complex eigensolver did not converge for matrix:\n" + dump.str());
    }
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

std::optional<std::vector<std::complex<double>>> block_eigenvalues(const LinearSystem& ls) {
    const int k = ls.modes;
    const auto& m = ls.matrix;
    for (int r = 0; r < 2 * k; ++r) {
        for (int c = 0; c < 2 * k; ++c) {
            const bool allowed = r == c || c == (r + k) % (2 * k);
            if (!allowed && m(r, c) != std::complex<double>{}) {
                return std::nullopt;
            }
        }
    }
    std::vector<std::complex<double>> out;
    for (int i = 0; i < k; ++i) {
        const auto a = m(i, i);
        const auto b = m(i, k + i);
        if (m(k + i, k + i) != std::conj(a) || m(k + i, i) != std::conj(b)) {
            return std::nullopt;
        }
        const auto root = std::sqrt(std::complex<double>{std::norm(b) - a.imag() * a.imag(), 0.0});
        out.push_back(a.real() + root);
        out.push_back(a.real() - root);
    }
    return out;
}

namespace {

void sort_by_real_desc(std::vector<std::complex<double>>& values) {
    std::sort(values.begin(), values.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
}

}  // namespace

StabilityResult max_real_eigenvalue(const LinearSystem& ls) {
    StabilityResult result;
    result.eigenvalues = dense_eigenvalues(ls.matrix);
    sort_by_real_desc(result.eigenvalues);
    result.lambda_max = result.eigenvalues.empty() ? 0.0 : result.eigenvalues.front().real();

    if (auto closed = block_eigenvalues(ls)) {
        sort_by_real_desc(*closed);
        const double scale = ls.matrix.cwiseAbs().maxCoeff();
        const double diff = std::abs(closed->front().real() - result.lambda_max);
        if (diff > 1e-12 * scale + 1e-300) {
            std::ostringstream dump;
            dump << ls.matrix;
            throw EigenSolverError(fmt::format("dense ({}) and block ({}) lambda_max disagree for matrix:\n{}",
                                               result.lambda_max, closed->front().real(), dump.str()));
        }
    }
    result.unstable = result.lambda_max > 0.0;
    if (ls.config.epsilon > 0.0) {
        result.boundary_ratio = stability_boundary(ls.resonance_order, ls.config.epsilon);
    } else {
        result.boundary_ratio = std::numeric_limits<double>::infinity();
    }
    return result;
}

double stability_boundary(int n_order, double epsilon) {
    if (n_order < 1) {
        throw std::invalid_argument("resonance order must be >= 1");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument(fmt::format("epsilon must lie in (0, 1) (got {})", epsilon));
    }
    return boost::rational_cast<double>(exact::factorial(n_order)) / std::pow(epsilon, n_order);
}

double closed_form_lambda_max(int n_order, double epsilon, double omega1, double kappa1) {
    const double nfact = boost::rational_cast<double>(exact::factorial(n_order));
    return std::pow(epsilon, n_order) * omega1 / (2.0 * nfact) - kappa1 / 2.0;
}

std::vector<SweepCell> sweep_stability(int n_order, std::span<const double> epsilon_grid,
                                       std::span<const double> ratio_grid, const SweepOptions& options) {
    if (epsilon_grid.empty() || ratio_grid.empty()) {
        throw std::invalid_argument("sweep grids must be nonempty");
    }
    ModelConfig base;
    base.n_order = n_order;
    base.k_modes = options.k_modes > 0 ? options.k_modes : n_order;
    base.omega1 = options.omega1;
    base.epsilon = 0.0;
    const TermSystem resonant = rwa_filter(generate_eom(base), n_order);

    std::vector<SweepCell> cells(epsilon_grid.size() * ratio_grid.size());
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        for (std::size_t j = 0; j < ratio_grid.size(); ++j) {
            auto& cell = cells[i * ratio_grid.size() + j];
            cell.epsilon = epsilon_grid[i];
            cell.ratio = ratio_grid[j];
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < cells.size(); idx = next++) {
            auto& cell = cells[idx];
            try {
                TermSystem local = resonant;
                local.config.epsilon = cell.epsilon;
                local.config.set_ratio(cell.ratio);
                local.config.validate();
                for (int mode = 1; mode <= local.config.k_modes; ++mode) {
                    local.damping[static_cast<std::size_t>(mode - 1)] = -local.config.kappa_of(mode) / 2.0;
                }
                const auto result = max_real_eigenvalue(assemble_linear_system(local));
                cell.lambda_max = result.lambda_max;
                cell.unstable = result.unstable;
            } catch (const std::exception& e) {
                cell.error = e.what();
                cell.lambda_max = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(cells.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < jobs; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    return cells;
}

}  // namespace dce
