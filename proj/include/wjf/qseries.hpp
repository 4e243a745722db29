#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "wjf/error.hpp"
#include "wjf/numtheory.hpp"

namespace wjf {

/// Truncated bivariate series
///
///     sum  c(a, b) q^(a / q_den) y^(b / y_den)
///
/// with arbitrary-precision integer coefficients. The q-exponents are bounded
/// below; every coefficient with q-exponent >= q_trunc is unknown. A series
/// without a truncation is exact (a finite Laurent polynomial).
///
/// Internally each q-power holds a dense row of y-coefficients. The
/// observable term map is the set of nonzero (q_num, y_num, coeff) triples.
class BiSeries {
public:
    struct Row {
        std::int64_t y_lo = 0;
        std::vector<Integer> c;  // c[i] is the coefficient of y^(y_lo + i); ends are nonzero

        std::int64_t y_hi() const { return y_lo + static_cast<std::int64_t>(c.size()) - 1; }
        const Integer* find(std::int64_t y_num) const;
    };

    struct Term {
        std::int64_t q_num;
        std::int64_t y_num;
        Integer coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    static constexpr std::int64_t kDefaultQDen = 24;
    static constexpr std::int64_t kDefaultYDen = 2;

    /// The exact zero series.
    explicit BiSeries(std::int64_t q_den = kDefaultQDen, std::int64_t y_den = kDefaultYDen,
                      std::optional<std::int64_t> trunc_num = std::nullopt);

    static BiSeries constant(const Integer& c, std::int64_t q_den = 1, std::int64_t y_den = 1);
    static BiSeries monomial(const Integer& c, std::int64_t q_num, std::int64_t y_num,
                             std::int64_t q_den = 1, std::int64_t y_den = 1);

    /// Adds c to the coefficient of q^(q_num/q_den) y^(y_num/y_den). Terms at or
    /// past the truncation are dropped, zero results are removed.
    void add_term(std::int64_t q_num, std::int64_t y_num, const Integer& c);

    std::int64_t q_den() const { return q_den_; }
    std::int64_t y_den() const { return y_den_; }
    bool is_exact() const { return !trunc_num_.has_value(); }
    std::optional<std::int64_t> trunc_num() const { return trunc_num_; }
    std::optional<Rational> q_trunc() const;
    bool empty() const { return rows_.empty(); }
    std::optional<std::int64_t> min_q_num() const;

    const std::map<std::int64_t, Row>& rows() const { return rows_; }
    const Row* row(std::int64_t q_num) const;

    /// Stored coefficient at scaled exponents, 0 if absent (no truncation check).
    Integer stored(std::int64_t q_num, std::int64_t y_num) const;

    /// All nonzero terms ordered by (q_num, y_num).
    std::vector<Term> terms() const;
    std::size_t term_count() const;

    /// Same series with truncation min(current, order); terms at or past the
    /// new truncation are removed.
    BiSeries truncated(const Rational& order) const;
    BiSeries truncated_num(std::int64_t trunc_num) const;

    /// Same series expressed with the given denominators, which must be
    /// multiples of the current ones.
    BiSeries rescaled(std::int64_t q_den, std::int64_t y_den) const;

    /// Equality of denominators-independent term maps and truncations.
    friend bool operator==(const BiSeries& a, const BiSeries& b);

    friend std::ostream& operator<<(std::ostream& os, const BiSeries& s);

private:
    friend class SeriesAccess;

    std::int64_t q_den_;
    std::int64_t y_den_;
    std::optional<std::int64_t> trunc_num_;
    std::map<std::int64_t, Row> rows_;
};

BiSeries operator-(const BiSeries& a);
BiSeries add(const BiSeries& a, const BiSeries& b);
BiSeries sub(const BiSeries& a, const BiSeries& b);
BiSeries scale(const BiSeries& a, const Integer& k);

/// Cauchy product truncated at min(a.trunc + minq(b), b.trunc + minq(a)).
BiSeries mul(const BiSeries& a, const BiSeries& b);

/// Reference schoolbook product; `mul` switches to Kronecker substitution for
/// large operands and must agree with this exactly.
BiSeries mul_schoolbook(const BiSeries& a, const BiSeries& b);
BiSeries mul_kronecker(const BiSeries& a, const BiSeries& b);

/// Multiplicative inverse. Requires a finite truncation and a leading
/// q-coefficient +-y^k; throws NonUnitLeading otherwise.
BiSeries invert(const BiSeries& a);

/// Quotient num / den where the leading q-coefficient of den is an arbitrary
/// Laurent polynomial; every q-coefficient of the result must be a Laurent
/// polynomial (InexactDivision otherwise). At least one operand must be truncated.
BiSeries divide(const BiSeries& num, const BiSeries& den);

/// a^k by repeated squaring; k < 0 inverts first.
BiSeries pow(const BiSeries& a, std::int64_t k);

BiSeries operator+(const BiSeries& a, const BiSeries& b);
BiSeries operator-(const BiSeries& a, const BiSeries& b);
BiSeries operator*(const BiSeries& a, const BiSeries& b);

/// Coefficient of q^q_exp y^y_exp; BeyondTruncation if q_exp >= q_trunc.
Integer coeff_at(const BiSeries& a, const Rational& q_exp, const Rational& y_exp);

/// Reduces both denominators to 1; NonIntegralExponent names the first
/// offending term.
BiSeries normalize_integral(const BiSeries& a);

/// Divides every coefficient by d, which must divide all of them exactly.
BiSeries divide_coefficients(const BiSeries& a, const Integer& d);

/// y -> y^alpha (alpha > 0).
BiSeries substitute_y_power(const BiSeries& a, std::int64_t alpha);

/// Product of (q^(q_num/q_den) y^(y_num/y_den)) with a, exact shift of all exponents.
BiSeries shift(const BiSeries& a, std::int64_t q_num, std::int64_t y_num);

/// Largest coefficient bit length.
std::size_t max_coeff_bits(const BiSeries& a);

}  // namespace wjf
