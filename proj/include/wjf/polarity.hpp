#pragma once

#include <cstdint>
#include <vector>

#include "wjf/exactla.hpp"
#include "wjf/forms.hpp"

namespace wjf {

/// Polar term q^n y^l with 1 <= l <= m, n >= 0 and polarity l^2 - 4mn > 0.
struct PolarTerm {
    std::int64_t n;
    std::int64_t l;
    std::int64_t polarity;
    friend bool operator==(const PolarTerm&, const PolarTerm&) = default;
};

/// Sorted by polarity descending, then l descending.
std::vector<PolarTerm> enumerate_polar_terms(std::int64_t m);

/// Number of (alpha, beta, gamma) >= 0 with alpha + 2 beta + 3 gamma = m.
std::int64_t dim_J0m(std::int64_t m);

/// Polar terms with polarity strictly above P, by enumeration.
std::int64_t p_count_enumerated(std::int64_t m, std::int64_t P);
/// sum_{l = ceil(sqrt P)}^{m} ceil((l^2 - P) / 4m), terms with l^2 = P contributing 0.
std::int64_t p_count_formula(std::int64_t m, std::int64_t P);
/// Both counts; FormulaMismatch if they differ.
std::int64_t p_count(std::int64_t m, std::int64_t P);

/// Smallest P >= 1 with p_count(m, P) < j(m).
std::int64_t P_plus(std::int64_t m);

/// ceil(m / 6).
std::int64_t P_minus(std::int64_t m);

/// Rows: the given polar terms; columns: basis elements; entry c_k(n, l).
ExactMatrix polar_matrix(const std::vector<BasisElement>& basis, const std::vector<PolarTerm>& terms);

/// Smallest polarity value P such that some nonzero form in J_{0,m} has all
/// polar coefficients of polarity > P equal to zero, i.e. the minimal
/// achievable maximal polarity.
std::int64_t P_of_m(std::int64_t m, const std::vector<BasisElement>& basis);
std::int64_t P_of_m(std::int64_t m, std::int64_t order);

/// Smallest order covering every polar coefficient of index m.
std::int64_t polar_order(std::int64_t m);

}  // namespace wjf
