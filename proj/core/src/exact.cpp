#include "dcelab/exact.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace dce::exact {

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) {
        return fmt::format("{}", q.numerator());
    }
    return fmt::format("{}/{}", q.numerator(), q.denominator());
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const auto num = std::stoll(text, &used);
            if (used != text.size()) {
                throw std::invalid_argument(text);
            }
            return Rational{num};
        }
        const auto num_text = text.substr(0, slash);
        const auto den_text = text.substr(slash + 1);
        const auto num = std::stoll(num_text, &used);
        if (used != num_text.size()) {
            throw std::invalid_argument(text);
        }
        const auto den = std::stoll(den_text, &used);
        if (used != den_text.size() || den == 0) {
            throw std::invalid_argument(text);
        }
        return Rational{num, den};
    } catch (const std::logic_error&) {
        throw std::invalid_argument(fmt::format("malformed rational '{}'", text));
    }
}

Rational factorial(int n) {
    Rational out{1};
    for (int i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

std::complex<double> GaussianRational::value() const {
    return {boost::rational_cast<double>(re), boost::rational_cast<double>(im)};
}

std::string to_string(const GaussianRational& z) {
    if (z.im.numerator() == 0) {
        return to_string(z.re);
    }
    if (z.re.numerator() == 0) {
        return fmt::format("i*{}", to_string(z.im));
    }
    return fmt::format("({} + i*{})", to_string(z.re), to_string(z.im));
}

ReducedRadical reduce_radical(std::int64_t n) {
    if (n < 1) {
        throw std::invalid_argument("radicand must be positive");
    }
    std::int64_t outside = 1;
    std::int64_t inside = n;
    for (std::int64_t f = 2; f * f <= inside; ++f) {
        while (inside % (f * f) == 0) {
            inside /= f * f;
            outside *= f;
        }
    }
    return {outside, inside};
}

const char* to_string(Scale s) {
    switch (s) {
        case Scale::One: return "1";
        case Scale::Omega1: return "omega1";
        case Scale::Drive: return "drive";
    }
    return "?";
}

Scale parse_scale(const std::string& text) {
    if (text == "1") return Scale::One;
    if (text == "omega1") return Scale::Omega1;
    if (text == "drive") return Scale::Drive;
    throw std::invalid_argument(fmt::format("unknown scale '{}'", text));
}

std::complex<double> Coefficient::evaluate(double omega1, double drive_omega) const {
    double factor = std::sqrt(static_cast<double>(radical));
    switch (scale) {
        case Scale::One: break;
        case Scale::Omega1: factor *= omega1; break;
        case Scale::Drive: factor *= drive_omega; break;
    }
    return value.value() * factor;
}

}  // namespace dce::exact
