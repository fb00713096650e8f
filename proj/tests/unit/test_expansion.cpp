#include <cmath>
#include <random>

#include "doctest.h"
#include "dcelab/expansion.hpp"
#include "dcelab/stability.hpp"
#include "oracle.hpp"

using namespace dce;
using exact::GaussianRational;
using exact::Rational;

namespace {

ModelConfig config(int k, int n, double eps = 0.45) {
    ModelConfig c;
    c.k_modes = k;
    c.n_order = n;
    c.epsilon = eps;
    return c;
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("rational formatting round trip") {
    CHECK(exact::to_string(Rational{-3, 4}) == "-3/4");
    CHECK(exact::to_string(Rational{6, 3}) == "2");
    CHECK(exact::parse_rational("-3/4") == Rational{-3, 4});
    CHECK(exact::parse_rational("5") == Rational{5});
    CHECK_THROWS((void)exact::parse_rational("1/0"));
    CHECK_THROWS((void)exact::parse_rational("x"));
    CHECK_THROWS((void)exact::parse_rational("1/2z"));
}

TEST_CASE("radicals are square free") {
    for (std::int64_t n = 1; n <= 200; ++n) {
        const auto r = exact::reduce_radical(n);
        CHECK(r.outside * r.outside * r.inside == n);
        for (std::int64_t f = 2; f * f <= r.inside; ++f) {
            CHECK(r.inside % (f * f) != 0);
        }
    }
}

TEST_CASE("gaussian arithmetic") {
    const GaussianRational a{Rational{1, 2}, Rational{-1, 3}};
    const auto b = exact::kI * exact::kI;
    CHECK(b == GaussianRational::real(Rational{-1}));
    CHECK((a * a.conj()).im.numerator() == 0);
    CHECK((a - a).is_zero());
    CHECK(a.value().real() == doctest::Approx(0.5));
}

}

TEST_SUITE("expansion") {

TEST_CASE("g coupling values") {
    CHECK(g_coupling(2, 2) == Rational{0});
    CHECK(g_coupling(1, 2) == Rational{-4, 3});
    CHECK(g_coupling(1, 3) == Rational{3, 4});
    CHECK(g_coupling(2, 3) == Rational{-12, 5});
}

TEST_CASE("g coupling is antisymmetric") {
    for (int k = 1; k <= 10; ++k) {
        CHECK(g_coupling(k, k).numerator() == 0);
        for (int j = 1; j <= 10; ++j) {
            CHECK(g_coupling(k, j) == -g_coupling(j, k));
        }
    }
    CHECK_THROWS((void)g_coupling(0, 1));
}

TEST_CASE("sin power harmonics") {
    const auto h0 = sin_power_harmonics(0);
    CHECK(h0.size() == 1);
    CHECK(h0.at(0) == GaussianRational::real(Rational{1}));

    const auto h1 = sin_power_harmonics(1);
    CHECK(h1.at(1) == GaussianRational::imag(Rational{-1, 2}));
    CHECK(h1.at(-1) == GaussianRational::imag(Rational{1, 2}));

    const auto h2 = sin_power_harmonics(2);
    CHECK(h2.size() == 3);
    CHECK(h2.at(0) == GaussianRational::real(Rational{1, 2}));
    CHECK(h2.at(2) == GaussianRational::real(Rational{-1, 4}));
    CHECK(h2.at(-2) == GaussianRational::real(Rational{-1, 4}));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int l = 0; l <= 6; ++l) {
        const auto h = sin_power_harmonics(l);
        for (int trial = 0; trial < 20; ++trial) {
            const double x = dist(rng);
            std::complex<double> sum{};
            for (const auto& [m, c] : h) {
                sum += c.value() * std::exp(std::complex<double>(0.0, m * x));
            }
            CHECK(std::abs(sum - std::pow(std::sin(x), l)) < 1e-12);
        }
    }
}

TEST_CASE("frequency and operator series") {
    CHECK(expand_frequency(1) == std::vector<Rational>{Rational{1}, Rational{-1}});
    CHECK(expand_frequency(2) == std::vector<Rational>{Rational{1}, Rational{-1}, Rational{1, 2}});
    CHECK(expand_frequency(6).back() == Rational{1, 720});

    const auto ops = expand_operator(3);
    CHECK(ops.even[0] == Rational{1});
    CHECK(ops.odd[1] == Rational{1, 2});
    CHECK(ops.even[2] == Rational{1, 8});
    CHECK(ops.odd[3] == Rational{1, 48});
    CHECK(ops.even[1].numerator() == 0);
    CHECK(ops.odd[2].numerator() == 0);
}

TEST_CASE("generated k=3 n=3 system equals the transcription") {
    const auto generated = generate_eom(config(3, 3));
    const auto transcribed = oracle::load_transcription(oracle::data_path("supplementary_k3_n3.txt"));
    REQUIRE(generated.terms.size() == transcribed.size());
    for (std::size_t i = 0; i < transcribed.size(); ++i) {
        INFO("term ", i, ": ", format_term(generated.terms[i]), " vs ", format_term(transcribed[i]));
        CHECK(generated.terms[i] == transcribed[i]);
    }
}

TEST_CASE("single mode, first order restricts the transcription") {
    const auto generated = generate_eom(config(1, 1));
    auto expected = oracle::load_transcription(oracle::data_path("supplementary_k3_n3.txt"));
    std::erase_if(expected, [](const EomTerm& t) { return t.target != 1 || t.eps_power != 1 || t.source.mode != 1; });
    CHECK(generated.terms == expected);
    for (const auto& t : generated.terms) {
        CHECK(t.source.mode == 1);
    }
}

TEST_CASE("intermode a2 coefficient in the first equation") {
    const auto sys = generate_eom(config(3, 3));
    int found = 0;
    for (const auto& t : equation(sys, 1)) {
        if (t.source == OperatorRef{2, false} && t.eps_power == 1) {
            ++found;
            CHECK(std::abs(t.harmonic) == 1);
            CHECK(t.slow_phase == -1);
            CHECK(t.coeff.scale == exact::Scale::Drive);
            CHECK(t.coeff.radical == 2);
            CHECK(t.coeff.value == GaussianRational::real(Rational{-1, 2}));
        }
    }
    CHECK(found == 2);
}

TEST_CASE("conjugation is an involution") {
    for (int n = 1; n <= kMaxExpansionOrder; ++n) {
        for (const auto& t : generate_eom(config(n, n)).terms) {
            CHECK(t.conjugate().conjugate() == t);
            const auto c = t.conjugate();
            CHECK(c.source.dagger != t.source.dagger);
            CHECK(c.harmonic == -t.harmonic);
            CHECK(c.slow_phase == -t.slow_phase);
        }
    }
}

TEST_CASE("truncation and canonical form") {
    for (int n = 1; n <= kMaxExpansionOrder; ++n) {
        const auto sys = generate_eom(config(n, n));
        CHECK(sys.damping.size() == static_cast<std::size_t>(n));
        CHECK(std::is_sorted(sys.terms.begin(), sys.terms.end(), term_key_less));
        CHECK(canonicalize(sys.terms) == sys.terms);
        for (const auto& t : sys.terms) {
            CHECK(t.eps_power >= 1);
            CHECK(t.eps_power <= n);
            CHECK_FALSE(t.coeff.value.is_zero());
        }
    }
}

TEST_CASE("generator rejects unsupported configurations") {
    CHECK_THROWS_AS((void)generate_eom(config(3, 7)), ConfigError);
    CHECK_THROWS_AS((void)generate_eom(config(0, 3)), ConfigError);
}

TEST_CASE("generated right-hand side matches the direct evaluation") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> eps_dist(0.01, 0.6);
    for (int trial = 0; trial < 100; ++trial) {
        ModelConfig cfg = config(3, 3, eps_dist(rng));
        cfg.kappa = {1e-3, 2e-3, 3e-3};
        cfg.drive_omega = 0.3 + 0.5 * (unit(rng) + 1.0);
        const TimeDependentSystem rhs(generate_eom(cfg));
        const double t = 50.0 * (unit(rng) + 1.0);
        std::array<std::complex<double>, 6> v;
        for (auto& z : v) {
            z = {unit(rng), unit(rng)};
        }
        std::array<std::complex<double>, 6> dv;
        rhs.apply(t, v, dv);
        const oracle::SupplementaryParams p{cfg.epsilon, cfg.omega1, {1e-3, 2e-3, 3e-3}, *cfg.drive_omega,
                                            oracle::shifted_frequency_ref(1.0, cfg.epsilon, 3)};
        const auto ref = oracle::supplementary_rhs(p, t, v);
        double scale = 0.0, diff = 0.0;
        for (int i = 0; i < 6; ++i) {
            scale = std::max(scale, std::abs(ref[i]));
            diff = std::max(diff, std::abs(dv[i] - ref[i]));
        }
        CHECK(diff <= 1e-12 * scale);
    }
}

}
