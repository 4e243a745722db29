#include "wjf/polarity.hpp"

#include <algorithm>
#include <sstream>

#include "wjf/error.hpp"

namespace wjf {

std::vector<PolarTerm> enumerate_polar_terms(std::int64_t m) {
    if (m < 1) throw InvalidArgument("enumerate_polar_terms: m must be positive");
    std::vector<PolarTerm> out;
    for (std::int64_t l = 1; l <= m; ++l)
        for (std::int64_t n = 0; l * l - 4 * m * n > 0; ++n) out.push_back({n, l, l * l - 4 * m * n});
    std::sort(out.begin(), out.end(), [](const PolarTerm& a, const PolarTerm& b) {
        if (a.polarity != b.polarity) return a.polarity > b.polarity;
        return a.l > b.l;
    });
    return out;
}

std::int64_t dim_J0m(std::int64_t m) {
    if (m < 0) return 0;
    std::int64_t count = 0;
    for (std::int64_t gamma = 0; 3 * gamma <= m; ++gamma) count += (m - 3 * gamma) / 2 + 1;
    return count;
}

std::int64_t p_count_enumerated(std::int64_t m, std::int64_t P) {
    std::int64_t count = 0;
    for (const PolarTerm& t : enumerate_polar_terms(m))
        if (t.polarity > P) ++count;
    return count;
}

std::int64_t p_count_formula(std::int64_t m, std::int64_t P) {
    if (P < 0) P = 0;
    std::int64_t count = 0;
    for (std::int64_t l = std::max<std::int64_t>(1, isqrt_ceil(P)); l <= m; ++l)
        if (l * l > P) count += ceil_div(l * l - P, 4 * m);
    return count;
}

std::int64_t p_count(std::int64_t m, std::int64_t P) {
    const std::int64_t a = p_count_enumerated(m, P);
    const std::int64_t b = p_count_formula(m, P);
    if (a != b) {
        std::ostringstream msg;
        msg << "polar count for m=" << m << ", P=" << P << ": enumeration " << a << ", formula " << b;
        throw FormulaMismatch(msg.str());
    }
    return a;
}

namespace {

// Terms with polarity > P counted per l as #{n >= 0 : 4mn < l^2 - P}.
std::int64_t p_count_by_floor(std::int64_t m, std::int64_t P) {
    std::int64_t count = 0;
    for (std::int64_t l = 1; l <= m; ++l)
        if (l * l > P) count += floor_div(l * l - P - 1, 4 * m) + 1;
    return count;
}

}  // namespace

std::int64_t P_plus(std::int64_t m) {
    const std::int64_t j = dim_J0m(m);
    auto count = [m](std::int64_t P) {
        const std::int64_t a = p_count_by_floor(m, P);
        const std::int64_t b = p_count_formula(m, P);
        if (a != b) throw FormulaMismatch("polar count mismatch at m=" + std::to_string(m) + ", P=" + std::to_string(P));
        return a;
    };
    // count is non-increasing in P and vanishes at P = m^2
    std::int64_t lo = 1, hi = m * m;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (count(mid) < j)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::int64_t P_minus(std::int64_t m) { return ceil_div(m, 6); }

std::int64_t polar_order(std::int64_t m) { return (m * m - 1) / (4 * m) + 1; }

ExactMatrix polar_matrix(const std::vector<BasisElement>& basis, const std::vector<PolarTerm>& terms) {
    ExactMatrix a(terms.size(), basis.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t k = 0; k < basis.size(); ++k) a(i, k) = coeff(basis[k].form, terms[i].n, terms[i].l);
    return a;
}

namespace {

std::uint64_t first_prime_above_2_62() {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, 62);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    return mpz_get_ui(p.get_mpz_t());
}

}  // namespace

std::int64_t P_of_m(std::int64_t m, const std::vector<BasisElement>& basis) {
    const std::int64_t j = static_cast<std::int64_t>(basis.size());
    if (j != dim_J0m(m)) throw InvalidArgument("P_of_m: basis size does not match j(m)");
    const std::vector<PolarTerm> terms = enumerate_polar_terms(m);
    const ExactMatrix full = polar_matrix(basis, terms);
    std::vector<std::int64_t> values;
    for (const PolarTerm& t : terms) values.push_back(t.polarity);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    // Terms are sorted by polarity descending, so "polarity > v" is a prefix.
    auto rows_above = [&](std::int64_t v) {
        std::size_t k = 0;
        while (k < terms.size() && terms[k].polarity > v) ++k;
        ExactMatrix a(k, full.cols());
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < full.cols(); ++c) a(i, c) = full(i, c);
        return a;
    };
    const std::uint64_t p = first_prime_above_2_62();
    // Full rank modulo p certifies full rank over Q; a deficient answer is
    // certified below by an exact kernel vector.
    auto deficient_mod_p = [&](std::size_t idx) {
        ExactMatrix a = rows_above(values[idx]);
        return a.rows() == 0 || static_cast<std::int64_t>(rank_mod_p(a, p)) < j;
    };
    std::size_t lo = 0, hi = values.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (deficient_mod_p(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    if (!nullspace(rows_above(values[lo])).empty()) return values[lo];
    // p was unlucky somewhere; scan exactly upward from lo.
    for (std::size_t i = lo + 1; i < values.size(); ++i)
        if (!nullspace(rows_above(values[i])).empty()) return values[i];
    return values.back();
}

std::int64_t P_of_m(std::int64_t m, std::int64_t order) {
    if (order < polar_order(m)) {
        std::ostringstream msg;
        msg << "P(m) for m=" << m << " needs order >= " << polar_order(m);
        throw BeyondTruncation(msg.str(), static_cast<long>(polar_order(m)));
    }
    return P_of_m(m, basis_J0m(static_cast<int>(m), order));
}

}  // namespace wjf
