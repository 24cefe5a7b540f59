#pragma once

// Exact rational in lowest terms, used for overlap coefficients so that
// ceil(theta * p) never goes through floating point.

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ops {

struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (d <= 0) throw std::invalid_argument("Rational: denominator must be positive");
        if (n < 0) throw std::invalid_argument("Rational: negative value");
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    bool operator==(const Rational&) const = default;

    /// ceil(this * x) for x >= 0, exact.
    std::int64_t ceil_mul(std::int64_t x) const {
        return (num * x + den - 1) / den;
    }

    bool is_one() const { return num == den; }
    bool in_unit_interval_left_open() const { return num > 0 && num <= den; }
};

}  // namespace ops
