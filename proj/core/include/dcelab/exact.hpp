#pragma once

// Exact coefficients for the symbolic equations of motion: Gaussian
// rationals, square-free radicals, and a scale symbol (1, omega1 or the
// drive frequency).

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace dce::exact {

using Rational = boost::rational<std::int64_t>;

[[nodiscard]] std::string to_string(const Rational& q);  // "p/q", or "p" for integers
[[nodiscard]] Rational parse_rational(const std::string& text);  // accepts "p" or "p/q"
[[nodiscard]] Rational factorial(int n);

/// re + i*im with rational parts.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    static GaussianRational real(Rational r) { return {r, Rational{0}}; }
    static GaussianRational imag(Rational r) { return {Rational{0}, r}; }

    [[nodiscard]] bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
    [[nodiscard]] GaussianRational conj() const { return {re, -im}; }
    [[nodiscard]] std::complex<double> value() const;

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return a + (-b);
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator*(const GaussianRational& a, const Rational& s) {
        return {a.re * s, a.im * s};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    bool operator==(const GaussianRational&) const = default;
};

inline const GaussianRational kI = GaussianRational::imag(Rational{1});

[[nodiscard]] std::string to_string(const GaussianRational& z);

/// sqrt(n) = outside * sqrt(inside) with inside square-free.
struct ReducedRadical {
    std::int64_t outside;
    std::int64_t inside;
};

[[nodiscard]] ReducedRadical reduce_radical(std::int64_t n);

enum class Scale : std::uint8_t { One, Omega1, Drive };

[[nodiscard]] const char* to_string(Scale s);
[[nodiscard]] Scale parse_scale(const std::string& text);

/// value * sqrt(radical) * scale, radical square-free.
struct Coefficient {
    GaussianRational value;
    std::int64_t radical = 1;
    Scale scale = Scale::One;

    [[nodiscard]] Coefficient conj() const { return {value.conj(), radical, scale}; }
    [[nodiscard]] std::complex<double> evaluate(double omega1, double drive_omega) const;
    bool operator==(const Coefficient&) const = default;
};

}  // namespace dce::exact
