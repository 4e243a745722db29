#include "wjf/slowgrowth.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wjf/error.hpp"

namespace wjf {

PolarAnchor::PolarAnchor(std::int64_t a_, std::int64_t b_, std::int64_t m_) : a(a_), b(b_), m(m_) {
    if (m < 1) throw InvalidArgument("anchor index must be positive");
    if (b < 1 || a < 0) throw InvalidArgument("anchor needs a >= 0 and b >= 1");
    if (polarity() <= 0) {
        std::ostringstream msg;
        msg << "q^" << a << " y^" << b << " is not polar for index " << m;
        throw InvalidArgument(msg.str());
    }
}

Rational alpha_value(std::int64_t m, std::int64_t b, std::int64_t n, std::int64_t l) {
    if (m < 1 || b < 1) throw InvalidArgument("alpha_value: m and b must be positive");
    Rational pol_term(l * l - 4 * m * n, 4 * m);
    pol_term.canonicalize();
    Rational best;
    for (std::int64_t j = 0; j < b; ++j) {
        Rational jb(j, b), lm(l, 2 * m);
        jb.canonicalize();
        lm.canonicalize();
        const Rational d = jb - lm;
        Rational v = pol_term - Rational(m) * d * d;
        if (j == 0 || v > best) best = v;
    }
    return best;
}

std::vector<PolarTerm> slow_constraint_terms(std::int64_t m, std::int64_t b) {
    std::vector<PolarTerm> out;
    for (const PolarTerm& t : enumerate_polar_terms(m))
        if (t.polarity > b * b || alpha_value(m, b, t.n, t.l) > 0) out.push_back(t);
    return out;
}

std::int64_t rho(std::int64_t m, std::int64_t b) {
    return static_cast<std::int64_t>(slow_constraint_terms(m, b).size());
}

std::int64_t j_minus_bound(std::int64_t m, std::int64_t b) { return dim_J0m(m) - rho(m, b); }

std::int64_t j_minus(std::int64_t m) {
    std::int64_t best = j_minus_bound(m, 1);
    for (std::int64_t b = 2; b * b <= m; ++b) best = std::max(best, j_minus_bound(m, b));
    return best;
}

namespace {

std::int64_t basis_index(const std::vector<BasisElement>& basis) {
    if (basis.empty()) throw InvalidArgument("empty basis");
    return basis.front().form.index_m;
}

}  // namespace

std::vector<IntVector> slow_0b_kernel(const std::vector<BasisElement>& basis, std::int64_t b) {
    const std::int64_t m = basis_index(basis);
    return nullspace(polar_matrix(basis, slow_constraint_terms(m, b)));
}

std::int64_t dim_slow_0b(const std::vector<BasisElement>& basis, std::int64_t b) {
    return static_cast<std::int64_t>(slow_0b_kernel(basis, b).size());
}

std::int64_t dim_slow_0b(std::int64_t m, std::int64_t b, std::int64_t order) {
    if (order < polar_order(m))
        throw BeyondTruncation("slow dimension needs every polar coefficient", static_cast<long>(polar_order(m)));
    return dim_slow_0b(basis_J0m(static_cast<int>(m), order), b);
}

bool functional_nonzero_on(const std::vector<BasisElement>& basis, const std::vector<IntVector>& space,
                           std::int64_t a, std::int64_t b) {
    IntVector f;
    for (const BasisElement& e : basis) f.push_back(coeff(e.form, a, b));
    for (const IntVector& v : space) {
        Integer s = 0;
        for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * v[k];
        if (s != 0) return true;
    }
    return false;
}

bool hatJ_nonempty(const std::vector<BasisElement>& basis, std::int64_t a, std::int64_t b) {
    const std::int64_t m = basis_index(basis);
    if (a == 0) {
        IntVector f;
        for (const BasisElement& e : basis) f.push_back(coeff(e.form, 0, b));
        return functional_on_nullspace(polar_matrix(basis, slow_constraint_terms(m, b)), f);
    }
    const PolarAnchor anchor(a, b, m);
    const SlowSpaceEstimate est = estimate_slow_space(basis, anchor, 3, 2 * m);
    return functional_nonzero_on(basis, est.slow, a, b);
}

bool hatJ_nonempty(std::int64_t m, std::int64_t a, std::int64_t b, std::int64_t order) {
    std::int64_t need = polar_order(m);
    if (a > 0) need = std::max(need, required_order_for_grid(PolarAnchor(a, b, m), 3, 2 * m));
    if (order < need) throw BeyondTruncation("hatJ_nonempty needs a higher order", static_cast<long>(need));
    return hatJ_nonempty(basis_J0m(static_cast<int>(m), order), a, b);
}

// ---- f_{a,b} ----

FWindow f_window(const PolarAnchor& anchor, std::int64_t n, std::int64_t l) {
    const std::int64_t m = anchor.m, a = anchor.a, b = anchor.b;
    const __int128 delta = anchor.polarity();
    const __int128 B = 4 * m * n + 2 * b * l;
    const __int128 C = __int128(l) * l - __int128(m) * m;
    // Summand discriminant is -delta r^2 + B r - l^2; it is >= -m^2 iff q(r) <= 0.
    auto q = [&](__int128 r) { return delta * r * r - B * r + C; };
    FWindow w;
    const __int128 disc = B * B - 4 * delta * C;
    if (disc < 0) return w;
    if (disc > __int128(INT64_MAX)) throw InvalidArgument("f_window: arguments too large");
    const std::int64_t s = isqrt(static_cast<std::int64_t>(disc));
    __int128 lo = floor_div(static_cast<std::int64_t>(B - s), static_cast<std::int64_t>(2 * delta)) - 1;
    __int128 hi = ceil_div(static_cast<std::int64_t>(B + s), static_cast<std::int64_t>(2 * delta)) + 1;
    while (lo <= hi && q(lo) > 0) ++lo;
    while (hi >= lo && q(hi) > 0) --hi;
    if (lo > hi) return w;
    w.r_lo = static_cast<std::int64_t>(lo);
    w.r_hi = static_cast<std::int64_t>(hi);
    std::int64_t max_d = INT64_MIN;
    std::int64_t need = 0;
    for (std::int64_t r = w.r_lo; r <= w.r_hi; ++r) {
        const std::int64_t np = n * r + a * r * r;
        const std::int64_t lp = l - b * r;
        const std::int64_t D = 4 * m * np - lp * lp;
        max_d = std::max(max_d, D);
        const auto [nr, lr] = reduce_index(m, np, lp);
        (void)lr;
        if (nr >= 0) need = std::max(need, nr + 1);
    }
    w.required_order = need;
    w.max_discriminant = max_d;
    return w;
}

Integer f_ab(const CoefficientFunction& src, const PolarAnchor& anchor, std::int64_t n, std::int64_t l) {
    if (src.index_m() != anchor.m) throw InvalidArgument("f_ab: index mismatch");
    const std::int64_t m = anchor.m;
    const FWindow w = f_window(anchor, n, l);
    Integer sum = 0;
    for (std::int64_t r = w.r_lo; r <= w.r_hi; ++r) {
        const std::int64_t np = n * r + anchor.a * r * r;
        const std::int64_t lp = l - anchor.b * r;
        const std::int64_t D = 4 * m * np - lp * lp;
        const int mu = static_cast<int>(mod(lp, 2 * m));
        if (D >= src.known_below(mu) && mod(D + std::int64_t(mu) * mu, 4 * m) == 0) {
            std::ostringstream msg;
            msg << "f_{" << anchor.a << "," << anchor.b << "}(" << n << "," << l << ") needs order "
                << w.required_order;
            throw BeyondTruncation(msg.str(), static_cast<long>(w.required_order));
        }
        sum += src.at(mu, D);
    }
    return sum;
}

std::int64_t required_order_for_grid(const PolarAnchor& anchor, std::int64_t n_max, std::int64_t l_max) {
    std::int64_t need = 0;
    for (std::int64_t n = 0; n <= n_max; ++n)
        for (std::int64_t l = -l_max; l <= l_max; ++l) need = std::max(need, f_window(anchor, n, l).required_order);
    return need;
}

// ---- growth classification ----

std::string to_string(Growth g) {
    switch (g) {
        case Growth::Slow: return "slow";
        case Growth::Fast: return "fast";
        default: return "inconclusive";
    }
}

std::optional<std::vector<SupportLine>> support_lines(const std::vector<GridValue>& grid) {
    std::set<SupportLine> lines;
    for (const GridValue& g : grid) {
        if (g.value == 0 || (g.n == 0 && g.l == 0)) continue;
        const std::int64_t d = gcd(std::abs(g.n), std::abs(g.l));
        std::int64_t e = g.l / d, f = -g.n / d;
        if (e < 0 || (e == 0 && f < 0)) {
            e = -e;
            f = -f;
        }
        lines.insert({e, f});
        if (lines.size() > 2) return std::nullopt;
    }
    return std::vector<SupportLine>(lines.begin(), lines.end());
}

GrowthSample classify_values(const PolarAnchor& anchor, std::vector<GridValue> grid, const GrowthThresholds& th) {
    std::sort(grid.begin(), grid.end(), [](const GridValue& x, const GridValue& y) {
        return x.n != y.n ? x.n < y.n : x.l < y.l;
    });
    GrowthSample out;
    out.anchor = anchor;
    out.grid = grid;

    std::map<std::int64_t, Integer> slice_max;
    Integer overall = 0;
    std::set<Integer> magnitudes;
    for (const GridValue& g : grid) {
        const Integer a = abs(g.value);
        Integer& s = slice_max[g.n];
        if (a > s) s = a;
        if (a > overall) overall = a;
        if (a != 0) magnitudes.insert(a);
    }

    if (overall > th.fast_magnitude) {
        std::size_t run = 1;
        bool have_prev = false;
        Integer prev;
        std::int64_t prev_n = 0;
        for (const auto& [n, s] : slice_max) {
            if (have_prev && n == prev_n + 1 && s > prev)
                ++run;
            else
                run = 1;
            if (run >= th.increasing_run) {
                out.classification = Growth::Fast;
                return out;
            }
            have_prev = true;
            prev = s;
            prev_n = n;
        }
    }

    auto lines = support_lines(grid);
    if (lines && magnitudes.size() <= 2 && overall <= th.slow_magnitude) {
        out.classification = Growth::Slow;
        out.lines = *lines;
    }
    return out;
}

GrowthSample classify_growth(const CoefficientFunction& src, const PolarAnchor& anchor, std::int64_t n_max,
                             std::int64_t l_max, const GrowthThresholds& th) {
    std::vector<GridValue> grid;
    for (std::int64_t n = 0; n <= n_max; ++n)
        for (std::int64_t l = -l_max; l <= l_max; ++l) grid.push_back({n, l, f_ab(src, anchor, n, l)});
    return classify_values(anchor, std::move(grid), th);
}

// ---- cyclotomic specialisations ----

namespace {

// Remainder of v modulo the monic polynomial p (both low degree first).
IntVector poly_mod(IntVector v, const IntVector& p) {
    const std::size_t dp = p.size() - 1;
    for (std::size_t i = v.size(); i-- > dp;) {
        if (v[i] == 0) continue;
        const Integer c = v[i];
        for (std::size_t k = 0; k <= dp; ++k) v[i - dp + k] -= c * p[k];
    }
    v.resize(std::min(v.size(), dp));
    return v;
}

bool all_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IntVector specialize_vector(const IntVector& v, std::int64_t j) {
    const std::int64_t b = static_cast<std::int64_t>(v.size());
    IntVector out(v.size(), Integer(0));
    for (std::int64_t s = 0; s < b; ++s) out[static_cast<std::size_t>(mod(j * s, b))] += v[static_cast<std::size_t>(s)];
    return out;
}

}  // namespace

IntVector cyclotomic_polynomial(std::int64_t d) {
    if (d < 1) throw InvalidArgument("cyclotomic_polynomial: d must be positive");
    IntVector p(static_cast<std::size_t>(d + 1), Integer(0));
    p[0] = -1;
    p[static_cast<std::size_t>(d)] = 1;
    for (std::int64_t e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        const IntVector q = cyclotomic_polynomial(e);
        // exact division of p by the monic q
        const std::size_t dq = q.size() - 1;
        IntVector quot(p.size() - dq, Integer(0));
        for (std::size_t i = p.size(); i-- > dq;) {
            const Integer c = p[i];
            quot[i - dq] = c;
            for (std::size_t k = 0; k <= dq; ++k) p[i - dq + k] -= c * q[k];
        }
        p = quot;
    }
    return p;
}

CycloSeries CycloSeries::specialize(std::int64_t j) const {
    CycloSeries out = *this;
    for (auto& [e, v] : out.coeffs) v = specialize_vector(v, j);
    return out;
}

bool CycloSeries::is_regular() const {
    if (trunc_num && *trunc_num <= 0)
        throw BeyondTruncation("regularity needs the series up to q^0");
    for (const auto& [e, v] : coeffs)
        if (e < 0 && !all_zero(v)) return false;
    return true;
}

bool CycloSeries::is_regular_at(std::int64_t j) const {
    if (trunc_num && *trunc_num <= 0)
        throw BeyondTruncation("regularity needs the series up to q^0");
    const IntVector phi_b = cyclotomic_polynomial(b);
    for (const auto& [e, v] : coeffs)
        if (e < 0 && !all_zero(poly_mod(specialize_vector(v, j), phi_b))) return false;
    return true;
}

std::int64_t chi_truncation(std::int64_t m, std::int64_t b, std::int64_t n_b, std::int64_t order) {
    // Unknown terms start at n = order; their smallest exponent is reached at
    // the most negative admissible l, and grows with n once n >= m.
    std::int64_t T = INT64_MAX;
    for (std::int64_t n = order; n <= std::max(order, m) + 1; ++n)
        T = std::min(T, b * b * n - b * n_b * isqrt(4 * m * n + m * m) + m * n_b * n_b);
    return T;
}

std::int64_t chi_required_order(std::int64_t m, std::int64_t b) {
    std::int64_t order = 1;
    for (std::int64_t n_b = 0; n_b < b; ++n_b)
        while (chi_truncation(m, b, n_b, order) <= 0) ++order;
    return order;
}

CycloSeries chi_generic(const JacobiForm& phi, std::int64_t b, std::int64_t n_b) {
    if (b < 1 || n_b < 0 || n_b >= b) throw InvalidArgument("chi: need b >= 1 and 0 <= n_b < b");
    const BiSeries& s = phi.series;
    if (s.q_den() != 1 || s.y_den() != 1) throw InvalidArgument("chi: form must have integral exponents");
    const std::int64_t m = phi.index_m;
    CycloSeries out;
    out.b = b;
    out.q_den = b * b;
    const std::int64_t T = chi_truncation(m, b, n_b, phi.order);
    out.trunc_num = T;
    for (const auto& [n, row] : s.rows())
        for (std::size_t i = 0; i < row.c.size(); ++i) {
            if (row.c[i] == 0) continue;
            const std::int64_t l = row.y_lo + static_cast<std::int64_t>(i);
            const std::int64_t e = b * b * n + b * n_b * l + m * n_b * n_b;
            if (e >= T) continue;
            IntVector& v = out.coeffs[e];
            if (v.empty()) v.assign(static_cast<std::size_t>(b), Integer(0));
            v[static_cast<std::size_t>(mod(l, b))] += row.c[i];
        }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = all_zero(it->second) ? out.coeffs.erase(it) : std::next(it);
    return out;
}

CycloSeries specialize_chi(const JacobiForm& phi, std::int64_t b, std::int64_t n_b, std::int64_t j) {
    return chi_generic(phi, b, n_b).specialize(j);
}

bool chi_regular(const JacobiForm& phi, std::int64_t b) {
    const std::int64_t need = chi_required_order(phi.index_m, b);
    if (phi.order < need) {
        std::ostringstream msg;
        msg << "chi regularity for b = " << b << " needs order " << need;
        throw BeyondTruncation(msg.str(), static_cast<long>(need));
    }
    for (std::int64_t n_b = 0; n_b < b; ++n_b) {
        const CycloSeries g = chi_generic(phi, b, n_b);
        for (std::int64_t j = 0; j < b; ++j)
            if (!g.is_regular_at(j)) return false;
    }
    return true;
}

bool passes_alpha_test(const JacobiForm& phi, std::int64_t b) {
    const std::int64_t m = phi.index_m;
    for (const PolarTerm& t : enumerate_polar_terms(m))
        if (alpha_value(m, b, t.n, t.l) > 0 && coeff(phi, t.n, t.l) != 0) return false;
    return true;
}

SpecializationIndex specialization_index(std::int64_t m, std::int64_t b, std::int64_t n, std::int64_t l) {
    SpecializationIndex out;
    out.n_b = mod(n, b);
    out.k = 2 * (n - out.n_b) * m / b + l;
    out.M = Rational(m * n * n + b * n * l, b * b);
    out.M.canonicalize();
    return out;
}

BiSeries generating_F(const JacobiForm& phi, std::int64_t b, std::int64_t n_b, std::int64_t k) {
    const CycloSeries g = chi_generic(phi, b, n_b);
    const IntVector phi_b = cyclotomic_polynomial(b);
    BiSeries out(b * b, 1, g.trunc_num);
    for (const auto& [e, v] : g.coeffs) {
        IntVector total(static_cast<std::size_t>(b), Integer(0));
        for (std::int64_t j = 0; j < b; ++j) {
            const IntVector sj = specialize_vector(v, j);
            const std::int64_t shift = mod(-k * j, b);
            for (std::int64_t t = 0; t < b; ++t)
                total[static_cast<std::size_t>(mod(t + shift, b))] += sj[static_cast<std::size_t>(t)];
        }
        IntVector red = poly_mod(total, phi_b);
        red.resize(std::max<std::size_t>(red.size(), 1), Integer(0));
        for (std::size_t i = 1; i < red.size(); ++i)
            if (red[i] != 0) throw NonIntegralDivision("generating series coefficient is not a rational integer");
        if (red[0] % b != 0) {
            std::ostringstream msg;
            msg << "coefficient " << red[0] << " of F at q^(" << e << "/" << b * b << ") is not divisible by " << b;
            throw NonIntegralDivision(msg.str());
        }
        const Integer c = red[0] / b;
        if (c != 0) out.add_term(e, 0, c);
    }
    return out;
}

std::size_t check_F_against_direct(const JacobiForm& phi, std::int64_t b, std::int64_t n_max, std::int64_t l_max) {
    const std::int64_t m = phi.index_m;
    const CoefficientFunction cf = to_coefficient_function(phi);
    const PolarAnchor anchor(0, b, m);
    std::map<std::pair<std::int64_t, std::int64_t>, BiSeries> F;
    std::size_t compared = 0;
    for (std::int64_t n = 0; n <= n_max; ++n)
        for (std::int64_t l = -l_max; l <= l_max; ++l) {
            const SpecializationIndex idx = specialization_index(m, b, n, l);
            const auto key = std::make_pair(idx.n_b, mod(idx.k, b));
            auto it = F.find(key);
            if (it == F.end()) it = F.emplace(key, generating_F(phi, b, key.first, key.second)).first;
            const std::int64_t e = m * n * n + b * n * l;  // M scaled by b^2
            if (e >= *it->second.trunc_num()) continue;
            Integer direct;
            try {
                direct = f_ab(cf, anchor, n, l);
            } catch (const BeyondTruncation&) {
                continue;
            }
            const Integer viaF = it->second.stored(e, 0);
            if (viaF != direct) {
                std::ostringstream msg;
                msg << "F_{" << key.first << "," << key.second << "} at q^(" << e << "/" << b * b << ") is " << viaF
                    << " but f_{0," << b << "}(" << n << "," << l << ") = " << direct;
                throw MismatchWithDirectSum(msg.str());
            }
            ++compared;
        }
    return compared;
}

// ---- W_sigma transfer ----

bool wsigma_transfer_check_6(const JacobiForm& phi, std::int64_t radius) {
    if (phi.index_m != 6) throw InvalidArgument("wsigma_transfer_check_6 needs index 6");
    const CoefficientFunction cf = to_coefficient_function(phi);
    const auto sigma = ResiduePermutation::from_cycles(6, {{1, 5}, {2, 10}, {4, 8}, {7, 11}});
    const CoefficientFunction hat = apply_W_sigma(cf, sigma);
    const PolarAnchor left(1, 5, 6), right(0, 1, 6);
    for (std::int64_t n = -radius; n <= radius; ++n)
        for (std::int64_t l = -radius; l <= radius; ++l)
            if (f_ab(cf, left, n, l) != f_ab(hat, right, 2 * n + l, -9 * n - 5 * l)) return false;
    return true;
}

std::vector<std::pair<std::int64_t, std::int64_t>> wsigma_transfer_mismatches_8(const JacobiForm& phi,
                                                                                std::int64_t radius) {
    if (phi.index_m != 8) throw InvalidArgument("wsigma_transfer_check_8 needs index 8");
    const CoefficientFunction cf = to_coefficient_function(phi);
    const auto sigma = ResiduePermutation::from_cycles(8, {{2, 6}, {4, 12}, {10, 14}});
    const CoefficientFunction hat = apply_W_sigma(cf, sigma);
    const PolarAnchor left(1, 6, 8), right(0, 2, 8);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t n = -radius; n <= radius; ++n)
        for (std::int64_t l = -radius; l <= radius; ++l)
            if (f_ab(cf, left, 2 * n, 2 * l) != f_ab(hat, right, 4 * n + 2 * l, -12 * n - 7 * l)) out.emplace_back(n, l);
    return out;
}

bool wsigma_transfer_check_8(const JacobiForm& phi, std::int64_t radius) {
    return wsigma_transfer_mismatches_8(phi, radius).empty();
}

// ---- slow subspaces about q^a y^b ----

std::vector<IntVector> max_polarity_space(const std::vector<BasisElement>& basis, std::int64_t P) {
    const std::int64_t m = basis_index(basis);
    std::vector<PolarTerm> terms;
    for (const PolarTerm& t : enumerate_polar_terms(m))
        if (t.polarity > P) terms.push_back(t);
    if (terms.empty()) {
        std::vector<IntVector> id;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            IntVector v(basis.size(), Integer(0));
            v[k] = 1;
            id.push_back(v);
        }
        return id;
    }
    return nullspace(polar_matrix(basis, terms));
}

SlowSpaceEstimate estimate_slow_space(const std::vector<BasisElement>& basis, const PolarAnchor& anchor,
                                      std::int64_t n_max, std::int64_t l_max, std::int64_t far_discriminant) {
    const std::int64_t m = basis_index(basis);
    if (anchor.m != m) throw InvalidArgument("estimate_slow_space: index mismatch");
    const std::int64_t need = required_order_for_grid(anchor, n_max, l_max);
    if (basis.front().form.order < need) {
        std::ostringstream msg;
        msg << "slow space about q^" << anchor.a << " y^" << anchor.b << " needs order " << need;
        throw BeyondTruncation(msg.str(), static_cast<long>(need));
    }
    SlowSpaceEstimate out;
    out.low_polarity = max_polarity_space(basis, anchor.polarity());
    const std::size_t k = out.low_polarity.size();

    struct Point {
        std::int64_t n, l;
        bool far;
    };
    std::vector<Point> points;
    for (std::int64_t n = 0; n <= n_max; ++n)
        for (std::int64_t l = -l_max; l <= l_max; ++l) {
            const FWindow w = f_window(anchor, n, l);
            points.push_back({n, l, w.r_hi >= w.r_lo && w.max_discriminant > far_discriminant});
        }

    // values[i][p] = f_{a,b} of the i-th low-polarity form at point p
    std::vector<IntVector> values;
    for (const IntVector& v : out.low_polarity) {
        const CoefficientFunction cf = to_coefficient_function(combine(basis, v));
        IntVector row;
        for (const Point& p : points) row.push_back(f_ab(cf, anchor, p.n, p.l));
        values.push_back(std::move(row));
    }

    ExactMatrix far(0, k);
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (!points[p].far) continue;
        IntVector r(k);
        for (std::size_t i = 0; i < k; ++i) r[i] = values[i][p];
        far.append_row(r);
    }
    std::vector<IntVector> kernel;
    if (far.rows() == 0) {
        for (std::size_t i = 0; i < k; ++i) {
            IntVector e(k, Integer(0));
            e[i] = 1;
            kernel.push_back(e);
        }
    } else {
        kernel = nullspace(far);
    }

    auto sample = [&](const IntVector& weights) {
        std::vector<GridValue> grid;
        for (std::size_t p = 0; p < points.size(); ++p) {
            Integer s = 0;
            for (std::size_t i = 0; i < k; ++i) s += weights[i] * values[i][p];
            grid.push_back({points[p].n, points[p].l, s});
        }
        return classify_values(anchor, std::move(grid));
    };

    ExactMatrix span(0, k);
    for (const IntVector& kv : kernel) {
        IntVector coords(basis.size(), Integer(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < basis.size(); ++c) coords[c] += kv[i] * out.low_polarity[i][c];
        make_primitive(coords);
        out.slow.push_back(coords);
        out.slow_samples.push_back(sample(kv));
        span.append_row(kv);
    }
    // Extend the slow span by unit vectors of the low-polarity space.
    std::size_t r = span.rows() == 0 ? 0 : rank(span);
    for (std::size_t i = 0; i < k; ++i) {
        IntVector e(k, Integer(0));
        e[i] = 1;
        ExactMatrix trial = span;
        trial.append_row(e);
        const std::size_t tr = rank(trial);
        if (tr > r) {
            span = trial;
            r = tr;
            out.other_samples.push_back(sample(e));
        }
    }
    return out;
}

}  // namespace wjf
