#include "wjf/thetaquot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "wjf/error.hpp"
#include "wjf/exactla.hpp"
#include "wjf/polarity.hpp"

namespace wjf {

namespace {

std::vector<std::int64_t> parse_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw InvalidArgument("theta quotient: empty entry in '" + text + "'");
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("theta quotient: bad entry '" + item + "'");
        }
        if (used != item.size()) throw InvalidArgument("theta quotient: bad entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string join(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

ThetaQuotientSpec ThetaQuotientSpec::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos || text.find('/', slash + 1) != std::string::npos)
        throw InvalidArgument("theta quotient must look like n1,n2/m1,m2");
    ThetaQuotientSpec s;
    s.nums = parse_list(text.substr(0, slash));
    s.dens = parse_list(text.substr(slash + 1));
    return s;
}

std::string ThetaQuotientSpec::to_string() const { return join(nums) + "/" + join(dens); }

ThetaQuotientSpec ThetaQuotientSpec::reduced() const {
    std::multiset<std::int64_t> n(nums.begin(), nums.end());
    std::vector<std::int64_t> d;
    for (std::int64_t x : dens) {
        auto it = n.find(x);
        if (it != n.end())
            n.erase(it);
        else
            d.push_back(x);
    }
    std::sort(d.begin(), d.end());
    return {std::vector<std::int64_t>(n.begin(), n.end()), d};
}

std::pair<std::int64_t, std::int64_t> index_and_b(const ThetaQuotientSpec& spec) {
    if (spec.nums.size() != spec.dens.size() || spec.nums.empty())
        throw InvalidArgument("theta quotient needs equally many (and at least one) numerator and denominator factors");
    std::int64_t s1 = 0, s2 = 0;
    for (std::int64_t x : spec.nums) {
        if (x < 1) throw InvalidArgument("theta quotient entries must be positive");
        s1 += x;
        s2 += x * x;
    }
    for (std::int64_t x : spec.dens) {
        if (x < 1) throw InvalidArgument("theta quotient entries must be positive");
        s1 -= x;
        s2 -= x * x;
    }
    if (s1 % 2 != 0 || s2 % 2 != 0 || s1 <= 0 || s2 <= 0) {
        std::ostringstream msg;
        msg << "theta quotient " << spec.to_string() << " has index " << s2 << "/2 and b " << s1 << "/2";
        throw NonIntegral(msg.str());
    }
    return {s2 / 2, s1 / 2};
}

bool is_holomorphic(const ThetaQuotientSpec& spec) {
    std::int64_t top = 0;
    for (std::int64_t x : spec.dens) top = std::max(top, x);
    for (std::int64_t d = 2; d <= top; ++d) {
        auto count = [d](const std::vector<std::int64_t>& v) {
            return std::count_if(v.begin(), v.end(), [d](std::int64_t x) { return x % d == 0; });
        };
        if (count(spec.nums) < count(spec.dens)) return false;
    }
    return true;
}

namespace {

// k^2 x^2/2 - k x/2 + F(F+1)/2 - k x F with F = floor(k x).
Rational pair_part(std::int64_t k, const Rational& x) {
    const Rational kx = Rational(k) * x;
    const Rational F = floor(kx);
    return kx * kx / 2 - kx / 2 + F * (F + 1) / 2 - kx * F;
}

}  // namespace

Rational slow_condition_value(const ThetaQuotientSpec& spec, std::int64_t r) {
    const std::int64_t b = index_and_b(spec).second;
    Rational x(r, b);
    x.canonicalize();
    Rational total = 0;
    for (std::int64_t n : spec.nums) total += pair_part(n, x);
    for (std::int64_t m : spec.dens) total -= pair_part(m, x);
    return total;
}

bool is_slow_quotient(const ThetaQuotientSpec& spec) {
    const std::int64_t b = index_and_b(spec).second;
    for (std::int64_t r = 1; r < b; ++r)
        if (slow_condition_value(spec, r) < 0) return false;
    return true;
}

JacobiForm theta_quotient_form(const ThetaQuotientSpec& spec, std::int64_t order) {
    const auto [m, b] = index_and_b(spec);
    (void)b;
    if (!is_holomorphic(spec))
        throw InvalidArgument("theta quotient " + spec.to_string() + " is not holomorphic");
    const std::int64_t work = order + 2;
    BiSeries num = theta1(spec.nums.front(), work);
    for (std::size_t i = 1; i < spec.nums.size(); ++i) num = num * theta1(spec.nums[i], work);
    BiSeries den = theta1(spec.dens.front(), work);
    for (std::size_t i = 1; i < spec.dens.size(); ++i) den = den * theta1(spec.dens[i], work);
    BiSeries q = divide(num, den);
    const auto t = q.trunc_num();
    if (!t || *t < order * q.q_den())
        throw BeyondTruncation("theta quotient lost precision", static_cast<long>(order));
    q = normalize_integral(q.truncated_num(order * q.q_den()));
    if (!q.empty()) {
        const auto& lead = q.rows().begin()->second.c;
        if (lead.back() < 0) q = -q;
    }
    JacobiForm f;
    f.weight = 0;
    f.index_m = static_cast<int>(m);
    f.series = q;
    f.order = order;
    return f;
}

ThetaQuotientSpec ks_quotient(std::int64_t k) {
    if (k < 1) throw InvalidArgument("ks_quotient: k must be positive");
    return {{k + 1, k + 2}, {1, 2}};
}

std::int64_t max_entry_bound(std::int64_t b) {
    if (b < 1) throw InvalidArgument("max_entry_bound: b must be positive");
    // phi(M) >= sqrt(M/2), so phi(M) <= 2b forces M <= 8 b^2
    std::int64_t best = 1;
    for (std::int64_t M = 1; M <= 8 * b * b; ++M)
        if (euler_phi(M) <= 2 * b) best = M;
    return best;
}

namespace {

void multisets(std::int64_t top, std::size_t size, std::int64_t from, std::vector<std::int64_t>& cur,
               std::vector<std::vector<std::int64_t>>& out) {
    if (cur.size() == size) {
        out.push_back(cur);
        return;
    }
    for (std::int64_t x = from; x <= top; ++x) {
        cur.push_back(x);
        multisets(top, size, x, cur, out);
        cur.pop_back();
    }
}

bool disjoint(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    for (std::int64_t x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) return false;
    return true;
}

}  // namespace

std::vector<ThetaQuotientSpec> enumerate_slow_quotients(std::int64_t m, std::int64_t b, std::int64_t n_max) {
    if (m < 1 || b < 1 || n_max < 1) throw InvalidArgument("enumerate_slow_quotients: arguments must be positive");
    const std::int64_t top = max_entry_bound(b);
    std::set<ThetaQuotientSpec> found;
    for (std::int64_t k = 1; k <= n_max; ++k) {
        std::vector<std::vector<std::int64_t>> all;
        std::vector<std::int64_t> cur;
        multisets(top, static_cast<std::size_t>(k), 1, cur, all);
        std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> by_sums;
        std::vector<std::pair<std::int64_t, std::int64_t>> sums;
        for (std::size_t i = 0; i < all.size(); ++i) {
            std::int64_t s1 = 0, s2 = 0;
            for (std::int64_t x : all[i]) {
                s1 += x;
                s2 += x * x;
            }
            sums.emplace_back(s1, s2);
            by_sums[{s1, s2}].push_back(i);
        }
        for (std::size_t i = 0; i < all.size(); ++i) {
            auto it = by_sums.find({sums[i].first - 2 * b, sums[i].second - 2 * m});
            if (it == by_sums.end()) continue;
            for (std::size_t j : it->second) {
                if (!disjoint(all[i], all[j])) continue;
                ThetaQuotientSpec s{all[i], all[j]};
                if (is_holomorphic(s) && is_slow_quotient(s)) found.insert(s);
            }
        }
    }
    return {found.begin(), found.end()};
}

std::int64_t span_dimension(const std::vector<ThetaQuotientSpec>& specs) {
    if (specs.empty()) return 0;
    const std::int64_t m = index_and_b(specs.front()).first;
    const std::vector<PolarTerm> terms = enumerate_polar_terms(m);
    const std::int64_t order = polar_order(m);
    ExactMatrix a(0, terms.size());
    for (const ThetaQuotientSpec& s : specs) {
        if (index_and_b(s).first != m) throw InvalidArgument("span_dimension: quotients of different index");
        const JacobiForm f = theta_quotient_form(s, order);
        IntVector row;
        for (const PolarTerm& t : terms) row.push_back(coeff(f, t.n, t.l));
        a.append_row(row);
    }
    return static_cast<std::int64_t>(rank(a));
}

}  // namespace wjf
