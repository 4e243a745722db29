#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wjf/exactla.hpp"
#include "wjf/forms.hpp"
#include "wjf/polarity.hpp"

namespace wjf {

/// Polar term q^a y^b of index m (b^2 - 4ma > 0).
struct PolarAnchor {
    std::int64_t a = 0;
    std::int64_t b = 1;
    std::int64_t m = 1;

    PolarAnchor() = default;
    PolarAnchor(std::int64_t a, std::int64_t b, std::int64_t m);
    std::int64_t polarity() const { return b * b - 4 * m * a; }
};

/// max_{j=0..b-1} [ -m (j/b - l/2m)^2 - (4mn - l^2)/4m ].
Rational alpha_value(std::int64_t m, std::int64_t b, std::int64_t n, std::int64_t l);

/// Polar terms (1 <= l <= m) with alpha > 0 or polarity > b^2, in the
/// enumeration order of enumerate_polar_terms.
std::vector<PolarTerm> slow_constraint_terms(std::int64_t m, std::int64_t b);

/// rho(m, b) = #slow_constraint_terms(m, b).
std::int64_t rho(std::int64_t m, std::int64_t b);
/// j(m) - rho(m, b).
std::int64_t j_minus_bound(std::int64_t m, std::int64_t b);
/// max over 1 <= b <= floor(sqrt m) of j_minus_bound(m, b).
std::int64_t j_minus(std::int64_t m);

/// Coordinates (in the basis) of a basis of the slow space about y^b.
std::vector<IntVector> slow_0b_kernel(const std::vector<BasisElement>& basis, std::int64_t b);
std::int64_t dim_slow_0b(const std::vector<BasisElement>& basis, std::int64_t b);
std::int64_t dim_slow_0b(std::int64_t m, std::int64_t b, std::int64_t order);

/// True iff c(a, b) is nonzero on the span of the given coordinate vectors.
bool functional_nonzero_on(const std::vector<BasisElement>& basis, const std::vector<IntVector>& space,
                           std::int64_t a, std::int64_t b);
/// hat J^{0,b}_m nonempty: c(0, b) does not vanish on the slow space about y^b.
bool hatJ_nonempty(const std::vector<BasisElement>& basis, std::int64_t a, std::int64_t b);
bool hatJ_nonempty(std::int64_t m, std::int64_t a, std::int64_t b, std::int64_t order);

/// Range of r with a possibly nonzero summand c(nr + ar^2, l - br), i.e.
/// discriminant >= -m^2, and the order needed to read every summand.
struct FWindow {
    std::int64_t r_lo = 0;
    std::int64_t r_hi = -1;  // empty if r_hi < r_lo
    std::int64_t required_order = 0;
    /// Largest discriminant among the summands (meaningless if empty).
    std::int64_t max_discriminant = 0;
};
FWindow f_window(const PolarAnchor& anchor, std::int64_t n, std::int64_t l);

/// f_{a,b}(n, l) = sum_r c(nr + ar^2, l - br). BeyondTruncation carries the
/// order the whole window needs.
Integer f_ab(const CoefficientFunction& src, const PolarAnchor& anchor, std::int64_t n, std::int64_t l);

/// Largest required order over the grid 0 <= n <= n_max, |l| <= l_max.
std::int64_t required_order_for_grid(const PolarAnchor& anchor, std::int64_t n_max, std::int64_t l_max);

enum class Growth { Slow, Fast, Inconclusive };
std::string to_string(Growth g);

struct GridValue {
    std::int64_t n;
    std::int64_t l;
    Integer value;
};

/// Line e n + f l = 0 through the origin.
struct SupportLine {
    std::int64_t e;
    std::int64_t f;
    friend bool operator==(const SupportLine&, const SupportLine&) = default;
    friend auto operator<=>(const SupportLine&, const SupportLine&) = default;
};

struct GrowthSample {
    PolarAnchor anchor;
    std::vector<GridValue> grid;  // ordered by (n, l)
    Growth classification = Growth::Inconclusive;
    std::vector<SupportLine> lines;  // support lines when Slow
};

struct GrowthThresholds {
    std::int64_t fast_magnitude = 1000;  // some |f| must exceed this for Fast
    std::int64_t slow_magnitude = 1000;  // on-line magnitudes must not exceed this for Slow
    std::size_t increasing_run = 3;      // consecutive n with strictly increasing slice maxima
};

/// Lines through the origin carrying the nonzero grid values; nullopt if more than two.
std::optional<std::vector<SupportLine>> support_lines(const std::vector<GridValue>& grid);

GrowthSample classify_values(const PolarAnchor& anchor, std::vector<GridValue> grid,
                             const GrowthThresholds& th = {});
GrowthSample classify_growth(const CoefficientFunction& src, const PolarAnchor& anchor, std::int64_t n_max,
                             std::int64_t l_max, const GrowthThresholds& th = {});

/// Series in q with coefficients in Z[x]/(x^b - 1). Exponents are scaled by q_den.
struct CycloSeries {
    std::int64_t b = 1;
    std::int64_t q_den = 1;
    std::map<std::int64_t, IntVector> coeffs;  // q_num -> coefficient vector of length b
    std::optional<std::int64_t> trunc_num;

    /// x -> x^j.
    CycloSeries specialize(std::int64_t j) const;
    /// No nonzero coefficient at a negative q-exponent (in Z[x]/(x^b-1)).
    bool is_regular() const;
    /// Regularity after mapping x to a primitive (b/gcd(b,j))-th root of unity.
    bool is_regular_at(std::int64_t j) const;
};

/// Cyclotomic polynomial Phi_d, coefficients from degree 0 upwards.
IntVector cyclotomic_polynomial(std::int64_t d);

/// Scaled q-exponent below which chi_generic is exact for a form of the given order.
std::int64_t chi_truncation(std::int64_t m, std::int64_t b, std::int64_t n_b, std::int64_t order);
/// Smallest order at which every chi_{n_b, j} is known through q^0.
std::int64_t chi_required_order(std::int64_t m, std::int64_t b);

/// q^{m n_b^2/b^2} phi(tau, (n_b tau + x)/b) with x a formal b-th root of unity;
/// specialize(j) of the result is chi_{n_b, j}.
CycloSeries chi_generic(const JacobiForm& phi, std::int64_t b, std::int64_t n_b);
CycloSeries specialize_chi(const JacobiForm& phi, std::int64_t b, std::int64_t n_b, std::int64_t j);

/// All chi_{n_b, j} regular at q = 0.
bool chi_regular(const JacobiForm& phi, std::int64_t b);
/// No nonzero polar coefficient with alpha > 0.
bool passes_alpha_test(const JacobiForm& phi, std::int64_t b);

struct SpecializationIndex {
    std::int64_t n_b;
    std::int64_t k;
    Rational M;
};
/// n_b = n mod b, M = m n^2/b^2 + n l/b, k = 2(n - n_b)m/b + l.
SpecializationIndex specialization_index(std::int64_t m, std::int64_t b, std::int64_t n, std::int64_t l);

/// F_{n_b,k} = (1/b) sum_j chi_{n_b,j} zeta^{-kj}, evaluated in Z[zeta_b] and
/// divided by b exactly (NonIntegralDivision otherwise). Series in q with
/// q-denominator b^2 and integer coefficients.
BiSeries generating_F(const JacobiForm& phi, std::int64_t b, std::int64_t n_b, std::int64_t k);

/// Compares every coefficient of F_{n_b,k} reachable from the grid
/// 0 <= n <= n_max, |l| <= l_max with f_{0,b}(n, l); MismatchWithDirectSum on
/// the first disagreement. Returns the number of comparisons made.
std::size_t check_F_against_direct(const JacobiForm& phi, std::int64_t b, std::int64_t n_max, std::int64_t l_max);

/// f_{1,5}(n,l) = hat f_{0,1}(2n+l, -9n-5l) for phi in J_{0,6} with hat from
/// W_sigma, sigma = (1 5)(2 10)(4 8)(7 11), on |n|, |l| <= radius.
bool wsigma_transfer_check_6(const JacobiForm& phi, std::int64_t radius);
/// f_{1,6}(2n,2l) = hat f_{0,2}(4n+2l, -12n-7l) for phi in J_{0,8}, sigma = (2 6)(4 12)(10 14).
bool wsigma_transfer_check_8(const JacobiForm& phi, std::int64_t radius);
/// Grid points (n, l) of the index-8 check where the two sides differ.
std::vector<std::pair<std::int64_t, std::int64_t>> wsigma_transfer_mismatches_8(const JacobiForm& phi,
                                                                                std::int64_t radius);

/// Space of forms with maximal polarity at most that of the anchor, and the
/// subspace whose f_{a,b} vanishes at every grid point whose window reaches a
/// discriminant above far_discriminant. Coordinates refer to the basis.
struct SlowSpaceEstimate {
    std::vector<IntVector> low_polarity;
    std::vector<IntVector> slow;
    std::vector<GrowthSample> slow_samples;  // classification of each slow vector
    std::vector<GrowthSample> other_samples;  // classification of each low-polarity vector outside the slow span
};
SlowSpaceEstimate estimate_slow_space(const std::vector<BasisElement>& basis, const PolarAnchor& anchor,
                                      std::int64_t n_max, std::int64_t l_max, std::int64_t far_discriminant = 0);

/// Forms of J_{0,m} with no polar term of polarity above P (coordinates).
std::vector<IntVector> max_polarity_space(const std::vector<BasisElement>& basis, std::int64_t P);

}  // namespace wjf
