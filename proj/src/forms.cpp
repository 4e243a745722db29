#include "wjf/forms.hpp"

#include <algorithm>
#include <sstream>

namespace wjf {

namespace {

constexpr std::int64_t kQ = BiSeries::kDefaultQDen;
constexpr std::int64_t kY = BiSeries::kDefaultYDen;

JacobiForm finish(const BiSeries& s, std::int64_t order, int weight, int m) {
    if (!s.trunc_num() || *s.trunc_num() < order * s.q_den()) {
        std::ostringstream msg;
        msg << "working precision too low for order " << order << " (series known below q^"
            << (s.q_trunc() ? s.q_trunc()->get_str() : std::string("inf")) << ")";
        throw InvariantViolation(msg.str());
    }
    JacobiForm f;
    f.weight = weight;
    f.index_m = m;
    f.order = order;
    f.series = normalize_integral(s.truncated_num(order * s.q_den()));
    return f;
}

BiSeries square(const BiSeries& s) { return mul(s, s); }

JacobiForm build_phi01(std::int64_t order) {
    const std::int64_t w = order + 1;
    BiSeries total(kQ, kY, w * kQ);
    for (int kind = 2; kind <= 4; ++kind) {
        auto [tz, t0] = jacobi_theta(kind, w);
        BiSeries part;
        if (kind == 2) {
            // theta_2(tau, 0) = 2 q^(1/8) (1 + ...): 4/theta_2(0)^2 = (theta_2(0)/2)^(-2)
            part = mul(square(tz), square(invert(divide_coefficients(t0, 2))));
        } else {
            part = scale(mul(square(tz), square(invert(t0))), 4);
        }
        total = add(total, part);
    }
    return finish(total, order, 0, 1);
}

JacobiForm build_phi02(std::int64_t order) {
    const std::int64_t w = order + 1;
    const std::int64_t bound = kQ * (w + 1);
    BiSeries sum(kQ, kY, bound);
    const std::int64_t mm = isqrt(bound / 3) + 1;
    const std::int64_t nn = isqrt(bound) + 1;
    for (std::int64_t m = -mm; m <= mm; ++m) {
        const int km = kronecker(-4, m);
        if (km == 0) continue;
        for (std::int64_t n = -nn; n <= nn; ++n) {
            const int kn = kronecker(12, n);
            if (kn == 0) continue;
            const std::int64_t e = 3 * m * m + n * n;
            if (e >= bound) continue;
            sum.add_term(e, m + n, Integer((3 * m - n) * km * kn));
        }
    }
    BiSeries eta_inv4 = pow(invert(eta(w + 1)), 4);
    return finish(divide_coefficients(mul(eta_inv4, sum), 2), order, 0, 2);
}

JacobiForm build_phi03(std::int64_t order) {
    const std::int64_t w = order + 1;
    const std::int64_t bound = kQ * w;
    BiSeries sum(kQ, kY, bound);
    const std::int64_t lmax = isqrt(w) + 2;
    for (std::int64_t l = -lmax; l <= lmax; ++l) {
        sum.add_term(kQ * (6 * l * l + l), 12 * l + 1, 1);
        sum.add_term(kQ * (6 * l * l - l), 12 * l - 1, 1);
        sum.add_term(kQ * (6 * l * l + 5 * l + 1), 12 * l + 5, -1);
        sum.add_term(kQ * (6 * l * l - 5 * l + 1), 12 * l - 5, -1);
    }
    // q^(1/24) / eta = prod (1 - q^n)^(-1)
    BiSeries partitions = invert(shift(eta(w), -1, 0));
    return finish(square(mul(partitions, sum)), order, 0, 3);
}

}  // namespace

BiSeries eta(std::int64_t order) {
    // Pentagonal number theorem: eta = sum_k (-1)^k q^((6k+1)^2/24).
    BiSeries s(kQ, 1, order * kQ);
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t e = (6 * k + 1) * (6 * k + 1);
        if (e >= order * kQ) break;
        s.add_term(e, 0, k % 2 == 0 ? 1 : -1);
    }
    for (std::int64_t k = -1;; --k) {
        const std::int64_t e = (6 * k + 1) * (6 * k + 1);
        if (e >= order * kQ) break;
        s.add_term(e, 0, k % 2 == 0 ? 1 : -1);
    }
    return s;
}

BiSeries theta1(std::int64_t alpha, std::int64_t order) {
    if (alpha <= 0) throw InvalidArgument("theta1: alpha must be positive");
    // theta_1(tau, z) = sum_n (-1)^n q^((2n+1)^2/8) y^((2n+1)/2)
    BiSeries s(kQ, kY, order * kQ);
    for (std::int64_t n = 0;; ++n) {
        const std::int64_t e = 3 * (2 * n + 1) * (2 * n + 1);
        if (e >= order * kQ) break;
        const int sign = n % 2 == 0 ? 1 : -1;
        s.add_term(e, alpha * (2 * n + 1), sign);
        s.add_term(e, -alpha * (2 * n + 1), -sign);  // n -> -1-n
    }
    return s;
}

std::pair<BiSeries, BiSeries> jacobi_theta(int kind, std::int64_t order) {
    if (kind < 2 || kind > 4) throw InvalidArgument("jacobi_theta: kind must be 2, 3 or 4");
    BiSeries tz(kQ, kY, order * kQ), t0(kQ, kY, order * kQ);
    const std::int64_t lim = isqrt(2 * order) + 2;
    for (std::int64_t n = -lim; n <= lim; ++n) {
        std::int64_t qe, ye;
        int sign = 1;
        if (kind == 2) {
            qe = 3 * (2 * n + 1) * (2 * n + 1);
            ye = 2 * n + 1;
        } else {
            qe = 12 * n * n;
            ye = 2 * n;
            if (kind == 4 && n % 2 != 0) sign = -1;
        }
        tz.add_term(qe, ye, sign);
        t0.add_term(qe, 0, sign);
    }
    return {tz, t0};
}

JacobiForm phi_generator(int k, std::int64_t order) {
    if (order <= 0) throw InvalidArgument("phi_generator: order must be positive");
    switch (k) {
        case 1: return build_phi01(order);
        case 2: return build_phi02(order);
        case 3: return build_phi03(order);
        default: throw InvalidArgument("phi_generator: k must be 1, 2 or 3");
    }
}

JacobiForm phi_minus2_1(std::int64_t order) {
    if (order <= 0) throw InvalidArgument("phi_minus2_1: order must be positive");
    const std::int64_t w = order + 1;
    BiSeries t = theta1(1, w);
    return finish(divide(mul(t, t), pow(eta(w), 6)), order, -2, 1);
}

std::vector<MonomialExponents> basis_monomials(int m) {
    std::vector<MonomialExponents> out;
    if (m < 0) return out;
    for (int alpha = m; alpha >= 0; --alpha)
        for (int beta = (m - alpha) / 2; beta >= 0; --beta) {
            const int rest = m - alpha - 2 * beta;
            if (rest % 3 == 0) out.push_back({alpha, beta, rest / 3});
        }
    return out;
}

BiSeries GeneratorCache::power(int k, int exponent, std::int64_t order) {
    if (exponent == 0) return BiSeries::constant(1).truncated_num(order);
    const std::array<std::int64_t, 3> key{k, exponent, 0};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end() && *it->second.trunc_num() >= order) return it->second.truncated_num(order);
    }
    BiSeries s = exponent == 1 ? phi_generator(k, order).series
                               : mul(power(k, exponent - 1, order), power(k, 1, order)).truncated_num(order);
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = cache_[key];
    if (slot.is_exact() || *slot.trunc_num() < order) slot = s;
    return s;
}

GeneratorCache& default_generator_cache() {
    static GeneratorCache cache;
    return cache;
}

std::vector<BasisElement> basis_J0m(int m, std::int64_t order, GeneratorCache& cache) {
    if (m < 1) throw InvalidArgument("basis_J0m: m must be positive");
    std::vector<BasisElement> out;
    for (const auto& e : basis_monomials(m)) {
        BiSeries s;
        bool first = true;
        for (int k = 0; k < 3; ++k) {
            if (e[static_cast<std::size_t>(k)] == 0) continue;
            BiSeries p = cache.power(k + 1, e[static_cast<std::size_t>(k)], order);
            s = first ? p : mul(s, p).truncated_num(order);
            first = false;
        }
        out.push_back({e, JacobiForm{0, m, s, order}});
    }
    return out;
}

JacobiForm combine(const std::vector<BasisElement>& basis, const std::vector<Integer>& x) {
    if (basis.empty() || x.size() != basis.size()) throw InvalidArgument("combine: size mismatch");
    JacobiForm out = basis.front().form;
    out.series = BiSeries(1, 1, out.order);
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (x[k] != 0) out.series = add(out.series, scale(basis[k].form.series, x[k]));
    return out;
}

std::pair<std::int64_t, std::int64_t> reduce_index(std::int64_t m, std::int64_t n, std::int64_t l) {
    std::int64_t r = mod(l, 2 * m);
    if (r > m) r -= 2 * m;
    // l^2 = r^2 mod 4m, so the shift in n is integral
    return {n + (r * r - l * l) / (4 * m), r};
}

Integer coeff(const JacobiForm& phi, std::int64_t n, std::int64_t l) {
    auto [nr, lr] = reduce_index(phi.index_m, n, l);
    if (nr < 0) return 0;
    if (nr >= phi.order) {
        std::ostringstream msg;
        msg << "c(" << n << "," << l << ") reduces to c(" << nr << "," << lr << "), needs order > " << nr
            << " but the form is known to order " << phi.order;
        throw BeyondTruncation(msg.str(), static_cast<long>(nr + 1));
    }
    return phi.series.stored(nr, lr);
}

void check_invariants(const JacobiForm& phi) {
    const BiSeries& s = phi.series;
    if (s.q_den() != 1 || s.y_den() != 1) throw InvariantViolation("series exponents are not integral");
    const std::int64_t m = phi.index_m;
    for (const auto& t : s.terms()) {
        std::ostringstream where;
        where << "term q^" << t.q_num << " y^" << t.y_num << " (coefficient " << t.coeff << ")";
        if (t.q_num < 0) throw InvariantViolation(where.str() + " has negative q-exponent");
        if (s.stored(t.q_num, -t.y_num) != t.coeff) throw InvariantViolation(where.str() + " breaks c(n,l)=c(n,-l)");
        if (phi.weight == 0 && t.y_num * t.y_num - 4 * m * t.q_num > m * m)
            throw InvariantViolation(where.str() + " has polarity above m^2");
        auto [nr, lr] = reduce_index(m, t.q_num, t.y_num);
        if (nr < 0 || s.stored(nr, lr) != t.coeff)
            throw InvariantViolation(where.str() + " differs from its reduced representative");
    }
}

// ---- residue permutations ----

ResiduePermutation::ResiduePermutation(int m, std::vector<int> perm) : m_(m), perm_(std::move(perm)) {
    if (m < 1 || perm_.size() != static_cast<std::size_t>(2 * m))
        throw InvalidArgument("ResiduePermutation: need 2m images");
    std::vector<bool> seen(perm_.size(), false);
    for (std::size_t mu = 0; mu < perm_.size(); ++mu) {
        const int v = perm_[mu];
        if (v < 0 || v >= 2 * m || seen[static_cast<std::size_t>(v)])
            throw InvalidArgument("ResiduePermutation: not a bijection on Z/2mZ");
        seen[static_cast<std::size_t>(v)] = true;
        const std::int64_t a = static_cast<std::int64_t>(mu), b = v;
        if (mod(a * a - b * b, 4 * m) != 0)
            throw InvalidArgument("ResiduePermutation: sigma must preserve squares modulo 4m");
    }
}

ResiduePermutation ResiduePermutation::identity(int m) {
    std::vector<int> p(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < 2 * m; ++i) p[static_cast<std::size_t>(i)] = i;
    return ResiduePermutation(m, p);
}

ResiduePermutation ResiduePermutation::from_cycles(int m, const std::vector<std::pair<int, int>>& transpositions) {
    std::vector<int> p(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < 2 * m; ++i) p[static_cast<std::size_t>(i)] = i;
    for (auto [a, b] : transpositions) {
        const auto ia = static_cast<std::size_t>(mod(a, 2 * m));
        const auto ib = static_cast<std::size_t>(mod(b, 2 * m));
        std::swap(p[ia], p[ib]);
    }
    return ResiduePermutation(m, p);
}

ResiduePermutation ResiduePermutation::multiplication(int m, int k) {
    std::vector<int> p(static_cast<std::size_t>(2 * m));
    for (int i = 0; i < 2 * m; ++i) p[static_cast<std::size_t>(i)] = static_cast<int>(mod(std::int64_t(k) * i, 2 * m));
    return ResiduePermutation(m, p);
}

// ---- coefficient functions ----

CoefficientFunction::CoefficientFunction(int m) : m_(m), values_(static_cast<std::size_t>(2 * m)) {
    if (m < 1) throw InvalidArgument("CoefficientFunction: m must be positive");
}

std::int64_t CoefficientFunction::start(int mu) const {
    const std::int64_t mm = m_;
    const std::int64_t sq = std::int64_t(mu) * mu;
    return -sq + 4 * mm * ceil_div(sq - mm * mm, 4 * mm);
}

std::int64_t CoefficientFunction::known_below(int mu) const {
    return start(mu) + 4 * std::int64_t(m_) * static_cast<std::int64_t>(column(mu).size());
}

Integer CoefficientFunction::at(std::int64_t mu_in, std::int64_t D) const {
    const int mu = static_cast<int>(mod(mu_in, 2 * m_));
    const std::int64_t mm = m_;
    if (mod(D + std::int64_t(mu) * mu, 4 * mm) != 0) return 0;
    if (D < -mm * mm) return 0;
    const std::int64_t k = (D - start(mu)) / (4 * mm);
    const auto& col = column(mu);
    if (k >= static_cast<std::int64_t>(col.size())) {
        std::int64_t r = mu > m_ ? mu - 2 * mm : mu;
        const std::int64_t n_red = (D + r * r) / (4 * mm);
        std::ostringstream msg;
        msg << "coefficient at residue " << mu << " and discriminant " << D << " needs order > " << n_red;
        throw BeyondTruncation(msg.str(), static_cast<long>(n_red + 1));
    }
    return col[static_cast<std::size_t>(k)];
}

void CoefficientFunction::set(int mu, std::int64_t D, const Integer& v) {
    const std::int64_t mm = m_;
    if (mod(D + std::int64_t(mu) * mu, 4 * mm) != 0 || D < -mm * mm) {
        if (v == 0) return;
        std::ostringstream msg;
        msg << "no admissible entry at residue " << mu << ", discriminant " << D;
        throw InvariantViolation(msg.str());
    }
    const auto k = static_cast<std::size_t>((D - start(mu)) / (4 * mm));
    auto& col = column(mu);
    if (k >= col.size()) col.resize(k + 1, Integer(0));
    col[k] = v;
}

CoefficientFunction CoefficientFunction::negated() const {
    CoefficientFunction out = *this;
    for (auto& col : out.values_)
        for (Integer& x : col) x = -x;
    return out;
}

bool CoefficientFunction::agrees_with(const CoefficientFunction& other) const {
    if (m_ != other.m_) return false;
    for (std::size_t mu = 0; mu < values_.size(); ++mu) {
        const auto& a = values_[mu];
        const auto& b = other.values_[mu];
        const std::size_t n = std::min(a.size(), b.size());
        if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin())) return false;
    }
    return true;
}

CoefficientFunction to_coefficient_function(const JacobiForm& phi) {
    const int m = phi.index_m;
    const std::int64_t mm = m;
    CoefficientFunction cf(m);
    for (int mu = 0; mu < 2 * m; ++mu) {
        const std::int64_t r = mu > m ? mu - 2 * mm : mu;
        auto& col = cf.column(mu);
        for (std::int64_t D = cf.start(mu);; D += 4 * mm) {
            const std::int64_t n = (D + r * r) / (4 * mm);
            if (n >= phi.order) break;
            col.push_back(n < 0 ? Integer(0) : phi.series.stored(n, r));
        }
    }
    for (const auto& t : phi.series.terms()) {
        const std::int64_t D = 4 * mm * t.q_num - t.y_num * t.y_num;
        Integer v;
        bool ok = D >= -mm * mm;
        if (ok) v = cf.at(t.y_num, D);
        if (!ok || v != t.coeff) {
            std::ostringstream msg;
            msg << "term q^" << t.q_num << " y^" << t.y_num << " has coefficient " << t.coeff
                << " but its class (residue " << mod(t.y_num, 2 * mm) << ", discriminant " << D << ") holds "
                << (ok ? v.get_str() : std::string("0"));
            throw InvariantViolation(msg.str());
        }
    }
    return cf;
}

JacobiForm from_coefficient_function(const CoefficientFunction& cf, int weight, std::int64_t order) {
    const std::int64_t m = cf.index_m();
    JacobiForm f{weight, cf.index_m(), BiSeries(1, 1, order), order};
    for (std::int64_t n = 0; n < order; ++n) {
        const std::int64_t lmax = isqrt(4 * m * n + m * m);
        for (std::int64_t l = -lmax; l <= lmax; ++l) f.series.add_term(n, l, cf.value(n, l));
    }
    return f;
}

std::vector<BiSeries> theta_decompose(const JacobiForm& phi) {
    const CoefficientFunction cf = to_coefficient_function(phi);
    const int m = phi.index_m;
    std::vector<BiSeries> h;
    for (int mu = 0; mu < 2 * m; ++mu) {
        BiSeries s(4 * m, 1, cf.known_below(mu));
        std::int64_t D = cf.start(mu);
        for (const Integer& v : cf.column(mu)) {
            s.add_term(D, 0, v);
            D += 4 * m;
        }
        h.push_back(std::move(s));
    }
    return h;
}

BiSeries theta_m_mu(int m, int mu, std::int64_t order) {
    const std::int64_t mm = m;
    BiSeries s(4 * mm, 1, 4 * mm * order);
    const std::int64_t lim = isqrt(4 * mm * order) + 2 * mm;
    for (std::int64_t r = mod(mu, 2 * mm) - 2 * mm * ((lim / (2 * mm)) + 1); r <= lim; r += 2 * mm)
        if (r * r < 4 * mm * order) s.add_term(r * r, r, 1);
    return s;
}

CoefficientFunction apply_W_sigma(const CoefficientFunction& cf, const ResiduePermutation& sigma) {
    if (sigma.index_m() != cf.index_m()) throw InvalidArgument("apply_W_sigma: index mismatch");
    CoefficientFunction out(cf.index_m());
    for (int mu = 0; mu < 2 * cf.index_m(); ++mu) out.column(mu) = cf.column(sigma(mu));
    return out;
}

CoefficientFunction apply_W_sigma(const JacobiForm& phi, const ResiduePermutation& sigma) {
    return apply_W_sigma(to_coefficient_function(phi), sigma);
}

}  // namespace wjf
