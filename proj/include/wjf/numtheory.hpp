#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace wjf {

using Integer = mpz_class;
using Rational = mpq_class;

/// Floor of a / b for b != 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}

/// Non-negative remainder of a modulo b (b > 0).
constexpr std::int64_t mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    return r < 0 ? r + b : r;
}

/// Largest s with s*s <= n (n >= 0).
std::int64_t isqrt(std::int64_t n);

/// Smallest s with s*s >= n (n >= 0).
std::int64_t isqrt_ceil(std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

/// Euler's totient.
std::int64_t euler_phi(std::int64_t n);

/// Jacobi symbol (a/n) for odd n > 0.
int jacobi(std::int64_t a, std::int64_t n);

/// Kronecker symbol (a/n): the completely multiplicative extension of the
/// Jacobi symbol with (a/-1) = sign(a) and (a/2) = 0, 1, -1 for a even,
/// a = +-1 mod 8, a = +-3 mod 8.
int kronecker(std::int64_t a, std::int64_t n);

Rational floor(const Rational& x);

}  // namespace wjf
