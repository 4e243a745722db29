#pragma once

#include <stdexcept>
#include <string>

namespace wjf {

/// Base class of every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Leading q-coefficient of a series is not a monomial +-y^k.
class NonUnitLeading : public Error {
public:
    using Error::Error;
};

/// A coefficient was requested at or past the known truncation order.
class BeyondTruncation : public Error {
public:
    BeyondTruncation(const std::string& what, long required_order = -1)
        : Error(what), required_order_(required_order) {}

    /// Smallest q-order that would have satisfied the request, or -1 if unknown.
    long required_order() const noexcept { return required_order_; }

private:
    long required_order_;
};

class NonIntegralExponent : public Error {
public:
    using Error::Error;
};

/// Coefficients sharing (residue, discriminant) disagree, or a structural invariant failed.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// The direct polar-term count and the closed-form count disagree.
class FormulaMismatch : public Error {
public:
    using Error::Error;
};

/// Theta quotient index or b is not an integer (or not positive).
class NonIntegral : public Error {
public:
    using Error::Error;
};

class NonIntegralDivision : public Error {
public:
    using Error::Error;
};

class MismatchWithDirectSum : public Error {
public:
    using Error::Error;
};

/// Exact division of Laurent polynomials left a remainder.
class InexactDivision : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace wjf
