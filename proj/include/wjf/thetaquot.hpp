#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wjf/forms.hpp"

namespace wjf {

/// prod_i theta_1(tau, n_i z) / prod_j theta_1(tau, m_j z) with equally many
/// numerator and denominator factors (weight 0).
struct ThetaQuotientSpec {
    std::vector<std::int64_t> nums;
    std::vector<std::int64_t> dens;

    /// Parses "n1,n2,.../m1,m2,...".
    static ThetaQuotientSpec parse(const std::string& text);
    std::string to_string() const;
    /// Sorted, with common entries cancelled.
    ThetaQuotientSpec reduced() const;
    friend bool operator==(const ThetaQuotientSpec&, const ThetaQuotientSpec&) = default;
    friend auto operator<=>(const ThetaQuotientSpec&, const ThetaQuotientSpec&) = default;
};

/// (index, b) = (sum (n^2 - m^2)/2, sum (n - m)/2); NonIntegral if either is
/// not a positive integer, InvalidArgument for unequal lengths or entries < 1.
std::pair<std::int64_t, std::int64_t> index_and_b(const ThetaQuotientSpec& spec);

/// For every d >= 2: #{i : d | n_i} >= #{j : d | m_j}.
bool is_holomorphic(const ThetaQuotientSpec& spec);

/// Sum over the pairs (n_j, m_j) of the slow-growth quantity at x = r/b.
Rational slow_condition_value(const ThetaQuotientSpec& spec, std::int64_t r);
/// slow_condition_value >= 0 for r = 1, ..., b - 1.
bool is_slow_quotient(const ThetaQuotientSpec& spec);

/// The quotient as a weight 0 form of the computed index, to the given order.
/// Its q^0 coefficient is y^b + ... + y^-b with positive leading coefficient.
JacobiForm theta_quotient_form(const ThetaQuotientSpec& spec, std::int64_t order);

/// [k+1, k+2] / [1, 2], slow about y^k.
ThetaQuotientSpec ks_quotient(std::int64_t k);

/// Largest M with phi(M) <= 2b: after cancellation the largest entry of a
/// holomorphic quotient is a numerator entry M and Phi_M divides the q^0
/// coefficient, whose y-span is 2b.
std::int64_t max_entry_bound(std::int64_t b);

/// Reduced holomorphic slow quotients of index m and given b with at most
/// n_max factors on each side, sorted.
std::vector<ThetaQuotientSpec> enumerate_slow_quotients(std::int64_t m, std::int64_t b, std::int64_t n_max = 5);

/// Dimension of the span of the quotients, read from their polar coefficients
/// (a weight 0 weak Jacobi form is determined by them).
std::int64_t span_dimension(const std::vector<ThetaQuotientSpec>& specs);

}  // namespace wjf
