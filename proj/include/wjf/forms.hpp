#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "wjf/qseries.hpp"

namespace wjf {

/// Weak Jacobi form given by its q-expansion with integral exponents.
/// Coefficients c(n, l) are known for n < order.
struct JacobiForm {
    int weight = 0;
    int index_m = 1;
    BiSeries series{1, 1};
    std::int64_t order = 0;
};

/// eta(tau) expanded to q-exponents < order (q-denominator 24).
BiSeries eta(std::int64_t order);

/// theta_1(tau, alpha z) to q-exponents < order (q-denominator 24, y-denominator 2).
BiSeries theta1(std::int64_t alpha, std::int64_t order);

/// theta_kind(tau, z) and theta_kind(tau, 0) for kind 2, 3, 4 with
///   theta_2 = sum q^((n+1/2)^2/2) y^(n+1/2),
///   theta_3 = sum q^(n^2/2) y^n,
///   theta_4 = sum (-1)^n q^(n^2/2) y^n.
std::pair<BiSeries, BiSeries> jacobi_theta(int kind, std::int64_t order);

/// The weight 0 generators phi_{0,1}, phi_{0,2}, phi_{0,3}.
JacobiForm phi_generator(int k, std::int64_t order);

/// theta_1(tau, z)^2 / eta^6, weight -2 and index 1.
JacobiForm phi_minus2_1(std::int64_t order);

using MonomialExponents = std::array<int, 3>;

struct BasisElement {
    MonomialExponents exps;  // alpha, beta, gamma of phi01^alpha phi02^beta phi03^gamma
    JacobiForm form;
};

/// Exponent triples with alpha + 2 beta + 3 gamma = m, ordered by alpha
/// descending, then beta descending.
std::vector<MonomialExponents> basis_monomials(int m);

/// Thread-safe memo of generator powers keyed by (k, exponent, order).
class GeneratorCache {
public:
    BiSeries power(int k, int exponent, std::int64_t order);

private:
    std::mutex mu_;
    std::map<std::array<std::int64_t, 3>, BiSeries> cache_;
};

GeneratorCache& default_generator_cache();

/// Basis phi01^alpha phi02^beta phi03^gamma of J_{0,m} to the given order.
std::vector<BasisElement> basis_J0m(int m, std::int64_t order, GeneratorCache& cache = default_generator_cache());

/// Integer combination sum_k x_k basis[k].
JacobiForm combine(const std::vector<BasisElement>& basis, const std::vector<Integer>& x);

/// Reduces l into (-m, m] keeping the discriminant; returns the canonical (n, l).
std::pair<std::int64_t, std::int64_t> reduce_index(std::int64_t m, std::int64_t n, std::int64_t l);

/// c(n, l). Zero when the reduced n is negative (which covers polarity > m^2);
/// BeyondTruncation when the reduced n is not below the order.
Integer coeff(const JacobiForm& phi, std::int64_t n, std::int64_t l);

/// Checks c(n,l) = c(n,-l), dependence on (l mod 2m, 4mn - l^2) only, and for
/// weight 0 vanishing at polarity > m^2, across every stored term. Throws
/// InvariantViolation naming the first failure.
void check_invariants(const JacobiForm& phi);

/// Bijection on Z/2mZ that preserves squares modulo 4m.
class ResiduePermutation {
public:
    ResiduePermutation(int m, std::vector<int> perm);

    static ResiduePermutation identity(int m);
    /// Product of transpositions given as pairs of residues.
    static ResiduePermutation from_cycles(int m, const std::vector<std::pair<int, int>>& transpositions);
    /// mu -> k mu mod 2m for k a unit modulo 2m.
    static ResiduePermutation multiplication(int m, int k);

    int index_m() const { return m_; }
    int operator()(std::int64_t mu) const { return perm_[static_cast<std::size_t>(mod(mu, 2 * m_))]; }
    const std::vector<int>& values() const { return perm_; }

private:
    int m_;
    std::vector<int> perm_;
};

/// Table (mu mod 2m, D = 4mn - l^2) -> integer. For each residue the known
/// discriminants are D = start(mu) + 4m k for 0 <= k < size, where start(mu)
/// is the smallest admissible D >= -m^2. Entries with D < -m^2 or with D of
/// the wrong class modulo 4m are zero.
class CoefficientFunction {
public:
    CoefficientFunction() = default;
    explicit CoefficientFunction(int m);

    int index_m() const { return m_; }

    /// Smallest D >= -m^2 with D = -mu^2 mod 4m.
    std::int64_t start(int mu) const;
    /// Exclusive upper bound of the known discriminants for mu.
    std::int64_t known_below(int mu) const;

    Integer at(std::int64_t mu, std::int64_t D) const;
    /// c(n, l) through the table.
    Integer value(std::int64_t n, std::int64_t l) const { return at(l, 4 * m_ * n - l * l); }

    /// Sets the entry at (mu, D), extending the known range as needed (gaps become 0).
    void set(int mu, std::int64_t D, const Integer& v);
    const std::vector<Integer>& column(int mu) const { return values_[static_cast<std::size_t>(mu)]; }
    std::vector<Integer>& column(int mu) { return values_[static_cast<std::size_t>(mu)]; }

    CoefficientFunction negated() const;
    /// Equality on the entries known to both tables (same index required).
    bool agrees_with(const CoefficientFunction& other) const;
    friend bool operator==(const CoefficientFunction&, const CoefficientFunction&) = default;

private:
    int m_ = 1;
    std::vector<std::vector<Integer>> values_;
};

/// Table of phi; InvariantViolation if two stored terms with the same key disagree.
CoefficientFunction to_coefficient_function(const JacobiForm& phi);

/// Rebuilds the q-expansion from the table to the given order.
JacobiForm from_coefficient_function(const CoefficientFunction& cf, int weight, std::int64_t order);

/// h_mu(tau) = sum_D c(mu, D) q^(D/4m) for mu = 0..2m-1 (q-denominator 4m).
std::vector<BiSeries> theta_decompose(const JacobiForm& phi);

/// theta_{m,mu}(tau, z) = sum over r = mu mod 2m of q^(r^2/4m) y^r, to q-exponent < order.
BiSeries theta_m_mu(int m, int mu, std::int64_t order);

/// Entry (mu, D) -> c(sigma(mu), D).
CoefficientFunction apply_W_sigma(const CoefficientFunction& cf, const ResiduePermutation& sigma);
CoefficientFunction apply_W_sigma(const JacobiForm& phi, const ResiduePermutation& sigma);

}  // namespace wjf
