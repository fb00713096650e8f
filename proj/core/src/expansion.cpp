#include "dcelab/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

namespace dce {

using exact::Coefficient;
using exact::GaussianRational;
using exact::Rational;
using exact::Scale;

EomTerm EomTerm::conjugate() const {
    EomTerm out = *this;
    out.source = source.adjoint();
    out.coeff = coeff.conj();
    out.harmonic = -harmonic;
    out.slow_phase = -slow_phase;
    return out;
}

std::complex<double> EomTerm::amplitude(double epsilon, double omega1, double drive_omega) const {
    return coeff.evaluate(omega1, drive_omega) * std::pow(epsilon, eps_power);
}

namespace {

auto term_key(const EomTerm& t) {
    return std::make_tuple(t.target, t.eps_power, t.source.dagger, t.source.mode, t.coeff.scale,
                           t.coeff.radical, t.harmonic, t.slow_phase);
}

}  // namespace

bool term_key_less(const EomTerm& a, const EomTerm& b) { return term_key(a) < term_key(b); }

std::vector<EomTerm> canonicalize(std::vector<EomTerm> terms) {
    std::stable_sort(terms.begin(), terms.end(), term_key_less);
    std::vector<EomTerm> merged;
    merged.reserve(terms.size());
    for (const auto& term : terms) {
        if (!merged.empty() && term_key(merged.back()) == term_key(term)) {
            merged.back().coeff.value += term.coeff.value;
        } else {
            merged.push_back(term);
        }
    }
    std::erase_if(merged, [](const EomTerm& t) { return t.coeff.value.is_zero(); });
    return merged;
}

Rational g_coupling(int k_idx, int j_idx) {
    if (k_idx < 1 || j_idx < 1) {
        throw std::invalid_argument("mode indices start at 1");
    }
    if (k_idx == j_idx) {
        return Rational{0};
    }
    const std::int64_t k = k_idx;
    const std::int64_t j = j_idx;
    const std::int64_t sign = ((k + j) % 2 == 0) ? 1 : -1;
    return Rational{sign * 2 * k * j, j * j - k * k};
}

Harmonics sin_power_harmonics(int l) {
    if (l < 0) {
        throw std::invalid_argument("sin power must be >= 0");
    }
    // sin x = (-i/2) e^{ix} + (i/2) e^{-ix}
    const GaussianRational up = GaussianRational::imag(Rational{-1, 2});
    const GaussianRational down = GaussianRational::imag(Rational{1, 2});
    Harmonics out{{0, GaussianRational::real(Rational{1})}};
    for (int step = 0; step < l; ++step) {
        Harmonics next;
        for (const auto& [m, c] : out) {
            next[m + 1] += c * up;
            next[m - 1] += c * down;
        }
        std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
        out = std::move(next);
    }
    return out;
}

std::vector<Rational> expand_frequency(int n_order) {
    if (n_order < 1) {
        throw std::invalid_argument("expansion order must be >= 1");
    }
    std::vector<Rational> out;
    for (int l = 0; l <= n_order; ++l) {
        const Rational sign{l % 2 == 0 ? 1 : -1};
        out.push_back(sign / exact::factorial(l));
    }
    return out;
}

OperatorExpansion expand_operator(int n_order) {
    if (n_order < 1) {
        throw std::invalid_argument("expansion order must be >= 1");
    }
    OperatorExpansion out;
    out.even.assign(static_cast<std::size_t>(n_order) + 1, Rational{0});
    out.odd.assign(static_cast<std::size_t>(n_order) + 1, Rational{0});
    for (int l = 0; l <= n_order; ++l) {
        const Rational c = Rational{1} / (Rational{std::int64_t{1} << l} * exact::factorial(l));
        (l % 2 == 0 ? out.even : out.odd)[static_cast<std::size_t>(l)] = c;
    }
    return out;
}

std::vector<Rational> series_product(std::span<const Rational> a, std::span<const Rational> b,
                                     int max_degree) {
    std::vector<Rational> out(static_cast<std::size_t>(max_degree) + 1, Rational{0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size() && i + j <= static_cast<std::size_t>(max_degree); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

std::vector<HamiltonianTerm> expand_hamiltonian(const ModelConfig& config) {
    const int n = config.n_order;
    const int k_modes = config.k_modes;

    // omega_k(t) a_k^+(t) a_k(t) with a(t) = Ce a0 - Co a0^+ becomes
    // omega_k F [ (Ce^2 + Co^2) a0^+ a0 - Ce Co (a0 a0 + a0^+ a0^+) ] + const.
    const auto freq = expand_frequency(n);
    const auto ops = expand_operator(n);
    const auto ce2 = series_product(ops.even, ops.even, n);
    const auto co2 = series_product(ops.odd, ops.odd, n);
    std::vector<Rational> number_part(ce2.size());
    for (std::size_t l = 0; l < ce2.size(); ++l) {
        number_part[l] = ce2[l] + co2[l];
    }
    const auto diag = series_product(freq, number_part, n);
    const auto squeeze = series_product(freq, series_product(ops.even, ops.odd, n), n);

    std::vector<HamiltonianTerm> out;
    for (int k = 1; k <= k_modes; ++k) {
        const OperatorRef a{k, false};
        const OperatorRef ad{k, true};
        for (int l = 0; l <= n; ++l) {
            for (const auto& [m, c] : sin_power_harmonics(l)) {
                const GaussianRational base = c * Rational{k};
                if (diag[static_cast<std::size_t>(l)].numerator() != 0) {
                    out.push_back({{base * diag[static_cast<std::size_t>(l)], 1, Scale::Omega1}, l, m, ad, a});
                }
                if (squeeze[static_cast<std::size_t>(l)].numerator() != 0) {
                    const GaussianRational s = -(base * squeeze[static_cast<std::size_t>(l)]);
                    out.push_back({{s, 1, Scale::Omega1}, l, m, a, a});
                    out.push_back({{s, 1, Scale::Omega1}, l, m, ad, ad});
                }
            }
        }
    }

    // -(qdot/q) f with qdot/q = eps W (e^{iWt} + e^{-iWt}) / 2.
    const GaussianRational velocity = GaussianRational::real(Rational{-1, 2});
    std::vector<std::pair<GaussianRational, std::pair<OperatorRef, OperatorRef>>> f_terms;
    std::vector<std::int64_t> f_radicals;
    for (int k = 1; k <= k_modes; ++k) {
        const OperatorRef a{k, false};
        const OperatorRef ad{k, true};
        f_terms.push_back({GaussianRational::imag(Rational{1, 4}), {ad, ad}});
        f_radicals.push_back(1);
        f_terms.push_back({GaussianRational::imag(Rational{-1, 4}), {a, a}});
        f_radicals.push_back(1);
    }
    for (int k = 1; k <= k_modes; ++k) {
        for (int j = 1; j <= k_modes; ++j) {
            if (j == k) {
                continue;
            }
            // sqrt(omega_k/omega_j) = sqrt(kj)/j
            const auto root = exact::reduce_radical(static_cast<std::int64_t>(k) * j);
            const GaussianRational pref =
                GaussianRational::imag(Rational{-1, 2}) * (g_coupling(k, j) * Rational{root.outside, j});
            const OperatorRef ak{k, false}, akd{k, true}, aj{j, false}, ajd{j, true};
            for (const auto& [sign, pair] : {std::pair{1, std::pair{akd, ajd}}, std::pair{1, std::pair{akd, aj}},
                                             std::pair{-1, std::pair{aj, ak}}, std::pair{-1, std::pair{ajd, ak}}}) {
                f_terms.push_back({pref * Rational{sign}, pair});
                f_radicals.push_back(root.inside);
            }
        }
    }
    for (int harmonic : {1, -1}) {
        for (std::size_t i = 0; i < f_terms.size(); ++i) {
            const auto& [c, pair] = f_terms[i];
            out.push_back({{velocity * c, f_radicals[i], Scale::Drive}, 1, harmonic, pair.first, pair.second});
        }
    }
    return out;
}

std::vector<EomTerm> heisenberg_rhs(std::span<const HamiltonianTerm> hamiltonian, int mode) {
    // [L R, a_m] = L [R, a_m] + [L, a_m] R, with [a_j^+, a_m] = -delta_jm.
    const OperatorRef creator{mode, true};
    std::vector<EomTerm> out;
    auto emit = [&](const HamiltonianTerm& h, const OperatorRef& source) {
        EomTerm t;
        t.target = mode;
        t.source = source;
        t.coeff = h.coeff;
        t.coeff.value = -(exact::kI * h.coeff.value);  // i * c * (-1)
        t.eps_power = h.eps_power;
        t.harmonic = h.harmonic;
        out.push_back(t);
    };
    for (const auto& h : hamiltonian) {
        if (h.right == creator) {
            emit(h, h.left);
        }
        if (h.left == creator) {
            emit(h, h.right);
        }
    }
    return out;
}

TermSystem generate_eom(const ModelConfig& config) {
    config.validate();
    if (config.n_order > kMaxExpansionOrder) {
        throw ConfigError(fmt::format("n_order = {} unsupported (maximum {})", config.n_order, kMaxExpansionOrder));
    }
    const auto hamiltonian = expand_hamiltonian(config);

    TermSystem system;
    system.config = config;
    std::vector<EomTerm> all;
    for (int target = 1; target <= config.k_modes; ++target) {
        for (auto term : heisenberg_rhs(hamiltonian, target)) {
            // A_j = a_j e^{i j w~ t}: a_j contributes e^{-i j w~ t}, a_j^+ e^{+i j w~ t},
            // and the target picks up e^{+i target w~ t}.
            term.slow_phase = term.source.dagger ? target + term.source.mode : target - term.source.mode;
            const bool secular = !term.source.dagger && term.source.mode == target && term.harmonic == 0 &&
                                 term.slow_phase == 0;
            if (!secular) {
                all.push_back(term);
            }
        }
        system.damping.push_back(-config.kappa_of(target) / 2.0);
    }
    system.terms = canonicalize(std::move(all));
    return system;
}

std::vector<EomTerm> equation(const TermSystem& system, int target) {
    std::vector<EomTerm> out;
    std::copy_if(system.terms.begin(), system.terms.end(), std::back_inserter(out),
                 [&](const EomTerm& t) { return t.target == target; });
    return out;
}

namespace {

std::string phase_text(int count, const char* symbol) {
    if (count == 0) {
        return {};
    }
    return fmt::format(" exp({:+d}i{}t)", count, symbol);
}

}  // namespace

std::string format_term(const EomTerm& term) {
    std::string text = fmt::format("+ eps^{} {}", term.eps_power, exact::to_string(term.coeff.value));
    if (term.coeff.radical != 1) {
        text += fmt::format(" sqrt({})", term.coeff.radical);
    }
    switch (term.coeff.scale) {
        case Scale::One: break;
        case Scale::Omega1: text += " w1"; break;
        case Scale::Drive: text += " W"; break;
    }
    text += phase_text(term.harmonic, "W");
    text += fmt::format(" A{}{}", term.source.mode, term.source.dagger ? "^+" : "");
    text += phase_text(term.slow_phase, "w~1");
    return text;
}

std::string format_equations(const TermSystem& system) {
    std::string out;
    for (int target = 1; target <= system.modes(); ++target) {
        out += fmt::format("dA{}/dt =\n", target);
        out += fmt::format("    - kappa{}/2 A{}\n", target, target);
        for (const auto& term : equation(system, target)) {
            out += "    " + format_term(term) + "\n";
        }
    }
    return out;
}

}  // namespace dce
