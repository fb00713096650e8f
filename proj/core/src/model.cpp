#include "dcelab/model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace dce {

void ModelConfig::validate() const {
    if (k_modes < 1) {
        throw ConfigError(fmt::format("k_modes must be >= 1 (got {})", k_modes));
    }
    if (n_order < 1) {
        throw ConfigError(fmt::format("n_order must be >= 1 (got {})", n_order));
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw ConfigError(fmt::format("epsilon must lie in [0, 1) (got {})", epsilon));
    }
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) {
        throw ConfigError(fmt::format("omega1 must be positive (got {})", omega1));
    }
    if (kappa.empty()) {
        throw ConfigError("kappa must have at least one entry");
    }
    if (kappa.size() != 1 && kappa.size() != static_cast<std::size_t>(k_modes)) {
        throw ConfigError(fmt::format("kappa has {} entries; expected 1 or k_modes = {}",
                                      kappa.size(), k_modes));
    }
    for (double value : kappa) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw ConfigError(fmt::format("kappa entries must be finite and >= 0 (got {})", value));
        }
    }
    if (drive_omega && !(*drive_omega > 0.0)) {
        throw ConfigError(fmt::format("drive_omega must be positive (got {})", *drive_omega));
    }
}

std::vector<std::string> ModelConfig::warnings() const {
    std::vector<std::string> out;
    if (k_modes < n_order) {
        out.push_back(fmt::format("k_modes = {} is below n_order = {}; reference runs use k = n",
                                  k_modes, n_order));
    }
    if (epsilon == 0.0) {
        out.emplace_back("epsilon = 0: the mirror is at rest and no photons are generated");
    }
    return out;
}

double ModelConfig::kappa_of(int mode) const {
    if (mode < 1 || mode > k_modes) {
        throw std::out_of_range(fmt::format("mode {} outside 1..{}", mode, k_modes));
    }
    return kappa.size() == 1 ? kappa.front() : kappa[static_cast<std::size_t>(mode - 1)];
}

double ModelConfig::shifted_omega1() const { return shifted_frequency(omega1, epsilon, n_order); }

double ModelConfig::drive() const {
    return drive_omega ? *drive_omega : dce::resonant_drive(shifted_omega1(), n_order);
}

void ModelConfig::set_ratio(double omega1_over_kappa) {
    if (!(omega1_over_kappa > 0.0)) {
        throw ConfigError(fmt::format("omega1/kappa1 must be positive (got {})", omega1_over_kappa));
    }
    kappa.assign(1, omega1 / omega1_over_kappa);
}

MirrorState mirror_position(double epsilon, double drive_omega, double t, double L0) {
    const double phase = drive_omega * t;
    return {L0 * std::exp(epsilon * std::sin(phase)), epsilon * drive_omega * std::cos(phase)};
}

double unperturbed_frequency(int mode_index, double omega1) {
    if (mode_index < 1) {
        throw std::invalid_argument(fmt::format("mode index must be >= 1 (got {})", mode_index));
    }
    return mode_index * omega1;
}

double shifted_frequency(double omega1, double epsilon, int n_order) {
    if (n_order < 0) {
        throw std::invalid_argument("n_order must be >= 0");
    }
    const double eps2 = epsilon * epsilon;
    double sum = 0.0;
    double term = 1.0;  // eps^{2l} / (l!)^2
    for (int l = 0; l <= n_order; ++l) {
        if (l > 0) {
            term *= eps2 / (static_cast<double>(l) * l);
        }
        sum += term;
    }
    return 0.5 * (1.0 + sum) * omega1;
}

double resonant_drive(double omega1_shifted, int n_order) {
    if (n_order < 1) {
        throw std::invalid_argument("resonance order must be >= 1");
    }
    return 2.0 * omega1_shifted / n_order;
}

CouplingStrengths coupling_strengths(double epsilon, double omega1) {
    return {epsilon * omega1, epsilon * epsilon * omega1 / 2.0};
}

double epsilon_max(const PhysicalEstimate& estimate) {
    if (!(estimate.cavity_length > 0.0) || !(estimate.mech_omega > 0.0)) {
        throw std::invalid_argument("cavity length and mechanical frequency must be positive");
    }
    return estimate.light_speed / (estimate.mech_omega * estimate.cavity_length);
}

}  // namespace dce
