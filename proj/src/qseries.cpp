#include "wjf/qseries.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace wjf {

class SeriesAccess {
public:
    static std::map<std::int64_t, BiSeries::Row>& rows(BiSeries& s) { return s.rows_; }
    static void set_trunc(BiSeries& s, std::optional<std::int64_t> t) { s.trunc_num_ = t; }
};

namespace {

using Row = BiSeries::Row;
using OptTrunc = std::optional<std::int64_t>;

void trim(Row& r) {
    std::size_t lo = 0;
    while (lo < r.c.size() && r.c[lo] == 0) ++lo;
    if (lo == r.c.size()) {
        r.c.clear();
        return;
    }
    std::size_t hi = r.c.size();
    while (r.c[hi - 1] == 0) --hi;
    if (lo > 0 || hi < r.c.size()) {
        std::vector<Integer> kept(std::make_move_iterator(r.c.begin() + static_cast<std::ptrdiff_t>(lo)),
                                  std::make_move_iterator(r.c.begin() + static_cast<std::ptrdiff_t>(hi)));
        r.c = std::move(kept);
        r.y_lo += static_cast<std::int64_t>(lo);
    }
}

OptTrunc min_trunc(OptTrunc a, OptTrunc b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

OptTrunc plus(OptTrunc a, std::int64_t k) {
    if (!a) return a;
    return *a + k;
}

std::pair<BiSeries, BiSeries> harmonize(const BiSeries& a, const BiSeries& b) {
    std::int64_t qd = lcm(a.q_den(), b.q_den());
    std::int64_t yd = lcm(a.y_den(), b.y_den());
    return {a.rescaled(qd, yd), b.rescaled(qd, yd)};
}

// Lowest q-exponent that may carry a nonzero coefficient: the first stored row,
// or the truncation of an empty truncated series.
OptTrunc effective_min_q(const BiSeries& s) {
    if (auto m = s.min_q_num()) return m;
    return s.trunc_num();
}

OptTrunc product_trunc(const BiSeries& a, const BiSeries& b) {
    OptTrunc ma = effective_min_q(a);
    OptTrunc mb = effective_min_q(b);
    OptTrunc ta = mb ? plus(a.trunc_num(), *mb) : OptTrunc{};
    OptTrunc tb = ma ? plus(b.trunc_num(), *ma) : OptTrunc{};
    return min_trunc(ta, tb);
}

bool is_exact_zero(const BiSeries& s) { return s.empty() && s.is_exact(); }

std::size_t bits_of(const Integer& x) { return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2); }

// r -= a * b (dense rows), extending r as needed.
void row_submul(Row& r, const Row& a, const Row& b) {
    if (a.c.empty() || b.c.empty()) return;
    std::int64_t lo = a.y_lo + b.y_lo;
    std::int64_t hi = a.y_hi() + b.y_hi();
    if (r.c.empty()) {
        r.y_lo = lo;
        r.c.assign(static_cast<std::size_t>(hi - lo + 1), Integer(0));
    } else {
        if (lo < r.y_lo) {
            r.c.insert(r.c.begin(), static_cast<std::size_t>(r.y_lo - lo), Integer(0));
            r.y_lo = lo;
        }
        if (hi > r.y_hi()) r.c.resize(static_cast<std::size_t>(hi - r.y_lo + 1), Integer(0));
    }
    const std::size_t off = static_cast<std::size_t>(lo - r.y_lo);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        const mpz_srcptr ai = a.c[i].get_mpz_t();
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j] == 0) continue;
            mpz_submul(r.c[off + i + j].get_mpz_t(), ai, b.c[j].get_mpz_t());
        }
    }
}

// Exact Laurent-polynomial quotient r / d; throws InexactDivision on remainder.
Row row_divide_exact(const Row& r, const Row& d) {
    Row q;
    if (r.c.empty()) return q;
    if (d.c.size() == 1) {
        const Integer& lead = d.c[0];
        q.y_lo = r.y_lo - d.y_lo;
        q.c.reserve(r.c.size());
        for (const Integer& x : r.c) {
            if (!mpz_divisible_p(x.get_mpz_t(), lead.get_mpz_t()))
                throw InexactDivision("coefficient not divisible by leading monomial");
            Integer v;
            mpz_divexact(v.get_mpz_t(), x.get_mpz_t(), lead.get_mpz_t());
            q.c.push_back(std::move(v));
        }
        return q;
    }
    if (r.c.size() < d.c.size()) throw InexactDivision("Laurent polynomial division leaves a remainder");
    std::vector<Integer> rem = r.c;
    const std::size_t nd = d.c.size();
    const std::size_t nq = r.c.size() - nd + 1;
    q.y_lo = r.y_lo - d.y_lo;
    q.c.assign(nq, Integer(0));
    const Integer& dlead = d.c[nd - 1];
    for (std::size_t k = nq; k-- > 0;) {
        Integer& top = rem[k + nd - 1];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), dlead.get_mpz_t()))
            throw InexactDivision("Laurent polynomial division leaves a remainder");
        mpz_divexact(q.c[k].get_mpz_t(), top.get_mpz_t(), dlead.get_mpz_t());
        for (std::size_t j = 0; j < nd; ++j)
            mpz_submul(rem[k + j].get_mpz_t(), q.c[k].get_mpz_t(), d.c[j].get_mpz_t());
    }
    for (const Integer& x : rem)
        if (x != 0) throw InexactDivision("Laurent polynomial division leaves a remainder");
    trim(q);
    return q;
}

std::string exponent_str(std::int64_t num, std::int64_t den) {
    Rational r(num, den);
    r.canonicalize();
    return r.get_str();
}

}  // namespace

const Integer* BiSeries::Row::find(std::int64_t y_num) const {
    if (c.empty() || y_num < y_lo || y_num > y_hi()) return nullptr;
    return &c[static_cast<std::size_t>(y_num - y_lo)];
}

BiSeries::BiSeries(std::int64_t q_den, std::int64_t y_den, std::optional<std::int64_t> trunc_num)
    : q_den_(q_den), y_den_(y_den), trunc_num_(trunc_num) {
    if (q_den <= 0 || y_den <= 0) throw InvalidArgument("series denominators must be positive");
}

BiSeries BiSeries::constant(const Integer& c, std::int64_t q_den, std::int64_t y_den) {
    BiSeries s(q_den, y_den);
    s.add_term(0, 0, c);
    return s;
}

BiSeries BiSeries::monomial(const Integer& c, std::int64_t q_num, std::int64_t y_num, std::int64_t q_den,
                            std::int64_t y_den) {
    BiSeries s(q_den, y_den);
    s.add_term(q_num, y_num, c);
    return s;
}

void BiSeries::add_term(std::int64_t q_num, std::int64_t y_num, const Integer& c) {
    if (c == 0) return;
    if (trunc_num_ && q_num >= *trunc_num_) return;
    auto it = rows_.find(q_num);
    if (it == rows_.end()) {
        Row r;
        r.y_lo = y_num;
        r.c.push_back(c);
        rows_.emplace(q_num, std::move(r));
        return;
    }
    Row& r = it->second;
    if (y_num < r.y_lo) {
        r.c.insert(r.c.begin(), static_cast<std::size_t>(r.y_lo - y_num), Integer(0));
        r.y_lo = y_num;
    } else if (y_num > r.y_hi()) {
        r.c.resize(static_cast<std::size_t>(y_num - r.y_lo + 1), Integer(0));
    }
    Integer& slot = r.c[static_cast<std::size_t>(y_num - r.y_lo)];
    slot += c;
    if (slot == 0) {
        trim(r);
        if (r.c.empty()) rows_.erase(it);
    }
}

std::optional<Rational> BiSeries::q_trunc() const {
    if (!trunc_num_) return std::nullopt;
    Rational r(*trunc_num_, q_den_);
    r.canonicalize();
    return r;
}

std::optional<std::int64_t> BiSeries::min_q_num() const {
    if (rows_.empty()) return std::nullopt;
    return rows_.begin()->first;
}

const BiSeries::Row* BiSeries::row(std::int64_t q_num) const {
    auto it = rows_.find(q_num);
    return it == rows_.end() ? nullptr : &it->second;
}

Integer BiSeries::stored(std::int64_t q_num, std::int64_t y_num) const {
    const Row* r = row(q_num);
    if (!r) return 0;
    const Integer* v = r->find(y_num);
    return v ? *v : Integer(0);
}

std::vector<BiSeries::Term> BiSeries::terms() const {
    std::vector<Term> out;
    for (const auto& [q, r] : rows_)
        for (std::size_t i = 0; i < r.c.size(); ++i)
            if (r.c[i] != 0) out.push_back({q, r.y_lo + static_cast<std::int64_t>(i), r.c[i]});
    return out;
}

std::size_t BiSeries::term_count() const {
    std::size_t n = 0;
    for (const auto& [q, r] : rows_)
        for (const Integer& x : r.c)
            if (x != 0) ++n;
    return n;
}

BiSeries BiSeries::truncated_num(std::int64_t trunc_num) const {
    BiSeries out = *this;
    std::int64_t t = trunc_num_ ? std::min(*trunc_num_, trunc_num) : trunc_num;
    out.trunc_num_ = t;
    out.rows_.erase(out.rows_.lower_bound(t), out.rows_.end());
    return out;
}

BiSeries BiSeries::truncated(const Rational& order) const {
    Rational scaled = order * q_den_;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return truncated_num(c.get_si());
}

BiSeries BiSeries::rescaled(std::int64_t q_den, std::int64_t y_den) const {
    if (q_den == q_den_ && y_den == y_den_) return *this;
    if (q_den % q_den_ != 0 || y_den % y_den_ != 0)
        throw InvalidArgument("rescaled: new denominators must be multiples of the current ones");
    const std::int64_t fq = q_den / q_den_;
    const std::int64_t fy = y_den / y_den_;
    BiSeries out(q_den, y_den, trunc_num_ ? std::optional<std::int64_t>(*trunc_num_ * fq) : std::nullopt);
    for (const auto& [q, r] : rows_) {
        Row nr;
        nr.y_lo = r.y_lo * fy;
        if (fy == 1) {
            nr.c = r.c;
        } else {
            nr.c.assign((r.c.size() - 1) * static_cast<std::size_t>(fy) + 1, Integer(0));
            for (std::size_t i = 0; i < r.c.size(); ++i) nr.c[i * static_cast<std::size_t>(fy)] = r.c[i];
        }
        out.rows_.emplace_hint(out.rows_.end(), q * fq, std::move(nr));
    }
    return out;
}

bool operator==(const BiSeries& a, const BiSeries& b) {
    auto [x, y] = harmonize(a, b);
    if (x.trunc_num_ != y.trunc_num_) return false;
    if (x.rows_.size() != y.rows_.size()) return false;
    for (auto ix = x.rows_.begin(), iy = y.rows_.begin(); ix != x.rows_.end(); ++ix, ++iy) {
        if (ix->first != iy->first) return false;
        if (ix->second.y_lo != iy->second.y_lo || ix->second.c != iy->second.c) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const BiSeries& s) {
    bool first = true;
    for (const auto& t : s.terms()) {
        if (!first) os << " + ";
        first = false;
        os << t.coeff;
        if (t.q_num != 0) os << "*q^(" << exponent_str(t.q_num, s.q_den()) << ")";
        if (t.y_num != 0) os << "*y^(" << exponent_str(t.y_num, s.y_den()) << ")";
    }
    if (first) os << "0";
    if (auto t = s.q_trunc()) os << " + O(q^(" << t->get_str() << "))";
    return os;
}

BiSeries operator-(const BiSeries& a) { return scale(a, -1); }

BiSeries scale(const BiSeries& a, const Integer& k) {
    if (k == 0) return BiSeries(a.q_den(), a.y_den(), a.trunc_num());
    BiSeries out = a;
    for (auto& [q, r] : SeriesAccess::rows(out))
        for (Integer& x : r.c) x *= k;
    return out;
}

BiSeries add(const BiSeries& a, const BiSeries& b) {
    auto [x, y] = harmonize(a, b);
    OptTrunc t = min_trunc(x.trunc_num(), y.trunc_num());
    BiSeries out = t ? x.truncated_num(*t) : x;
    for (const auto& [q, r] : y.rows()) {
        if (t && q >= *t) break;
        for (std::size_t i = 0; i < r.c.size(); ++i)
            if (r.c[i] != 0) out.add_term(q, r.y_lo + static_cast<std::int64_t>(i), r.c[i]);
    }
    return out;
}

BiSeries sub(const BiSeries& a, const BiSeries& b) { return add(a, -b); }

BiSeries operator+(const BiSeries& a, const BiSeries& b) { return add(a, b); }
BiSeries operator-(const BiSeries& a, const BiSeries& b) { return sub(a, b); }
BiSeries operator*(const BiSeries& a, const BiSeries& b) { return mul(a, b); }

BiSeries mul_schoolbook(const BiSeries& a0, const BiSeries& b0) {
    auto [a, b] = harmonize(a0, b0);
    if (is_exact_zero(a) || is_exact_zero(b)) return BiSeries(a.q_den(), a.y_den());
    const OptTrunc t = product_trunc(a, b);
    BiSeries out(a.q_den(), a.y_den(), t);

    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> ranges;
    for (const auto& [qa, ra] : a.rows()) {
        for (const auto& [qb, rb] : b.rows()) {
            const std::int64_t q = qa + qb;
            if (t && q >= *t) break;
            auto [it, fresh] = ranges.try_emplace(q, ra.y_lo + rb.y_lo, ra.y_hi() + rb.y_hi());
            if (!fresh) {
                it->second.first = std::min(it->second.first, ra.y_lo + rb.y_lo);
                it->second.second = std::max(it->second.second, ra.y_hi() + rb.y_hi());
            }
        }
    }
    auto& rows = SeriesAccess::rows(out);
    for (const auto& [q, range] : ranges) {
        Row r;
        r.y_lo = range.first;
        r.c.assign(static_cast<std::size_t>(range.second - range.first + 1), Integer(0));
        rows.emplace_hint(rows.end(), q, std::move(r));
    }
    for (const auto& [qa, ra] : a.rows()) {
        for (const auto& [qb, rb] : b.rows()) {
            const std::int64_t q = qa + qb;
            if (t && q >= *t) break;
            Row& r = rows.at(q);
            const std::size_t off = static_cast<std::size_t>(ra.y_lo + rb.y_lo - r.y_lo);
            for (std::size_t i = 0; i < ra.c.size(); ++i) {
                if (ra.c[i] == 0) continue;
                const mpz_srcptr ai = ra.c[i].get_mpz_t();
                for (std::size_t j = 0; j < rb.c.size(); ++j) {
                    if (rb.c[j] == 0) continue;
                    mpz_addmul(r.c[off + i + j].get_mpz_t(), ai, rb.c[j].get_mpz_t());
                }
            }
        }
    }
    for (auto it = rows.begin(); it != rows.end();) {
        trim(it->second);
        it = it->second.c.empty() ? rows.erase(it) : std::next(it);
    }
    return out;
}

namespace {

struct KroneckerLayout {
    std::int64_t q0 = 0;     // q_num of packed row 0
    std::int64_t step = 1;   // q_num spacing between packed rows
    std::int64_t y0 = 0;     // y_num of slot 0 within a row
    std::int64_t nrows = 0;
};

// Packs the rows with q_num < q_limit into a signed integer with `limbs`
// limbs per coefficient slot and `width` slots per row.
Integer pack(const BiSeries& s, const KroneckerLayout& lay, std::int64_t width, std::size_t limbs, OptTrunc q_limit) {
    const std::size_t total = static_cast<std::size_t>(lay.nrows * width) * limbs;
    std::vector<mp_limb_t> pos(total, 0), neg(total, 0);
    for (const auto& [q, r] : s.rows()) {
        if (q_limit && q >= *q_limit) break;
        const std::int64_t base = ((q - lay.q0) / lay.step) * width;
        for (std::size_t i = 0; i < r.c.size(); ++i) {
            const Integer& c = r.c[i];
            const int sg = sgn(c);
            if (sg == 0) continue;
            const std::size_t slot = static_cast<std::size_t>(base + (r.y_lo + static_cast<std::int64_t>(i) - lay.y0));
            std::vector<mp_limb_t>& buf = sg > 0 ? pos : neg;
            mpz_export(&buf[slot * limbs], nullptr, -1, sizeof(mp_limb_t), 0, 0, c.get_mpz_t());
        }
    }
    Integer p, n;
    mpz_import(p.get_mpz_t(), total, -1, sizeof(mp_limb_t), 0, 0, pos.data());
    mpz_import(n.get_mpz_t(), total, -1, sizeof(mp_limb_t), 0, 0, neg.data());
    return p - n;
}

}  // namespace

BiSeries mul_kronecker(const BiSeries& a0, const BiSeries& b0) {
    auto [a, b] = harmonize(a0, b0);
    if (a.empty() || b.empty()) return mul_schoolbook(a, b);
    const OptTrunc t = product_trunc(a, b);
    const std::int64_t qa0 = *a.min_q_num();
    const std::int64_t qb0 = *b.min_q_num();
    const OptTrunc a_limit = t ? OptTrunc(*t - qb0) : OptTrunc{};
    const OptTrunc b_limit = t ? OptTrunc(*t - qa0) : OptTrunc{};

    std::int64_t step = 0;
    std::int64_t ya_lo = std::numeric_limits<std::int64_t>::max(), ya_hi = std::numeric_limits<std::int64_t>::min();
    std::int64_t yb_lo = ya_lo, yb_hi = ya_hi;
    std::int64_t qa_hi = qa0, qb_hi = qb0;
    std::size_t bits_a = 0, bits_b = 0, nnz_a = 0, nnz_b = 0;
    for (const auto& [q, r] : a.rows()) {
        if (a_limit && q >= *a_limit) break;
        step = gcd(step, q - qa0);
        ya_lo = std::min(ya_lo, r.y_lo);
        ya_hi = std::max(ya_hi, r.y_hi());
        qa_hi = q;
        for (const Integer& x : r.c) {
            if (x == 0) continue;
            bits_a = std::max(bits_a, bits_of(x));
            ++nnz_a;
        }
    }
    for (const auto& [q, r] : b.rows()) {
        if (b_limit && q >= *b_limit) break;
        step = gcd(step, q - qb0);
        yb_lo = std::min(yb_lo, r.y_lo);
        yb_hi = std::max(yb_hi, r.y_hi());
        qb_hi = q;
        for (const Integer& x : r.c) {
            if (x == 0) continue;
            bits_b = std::max(bits_b, bits_of(x));
            ++nnz_b;
        }
    }
    if (nnz_a == 0 || nnz_b == 0) return mul_schoolbook(a, b);
    if (step == 0) step = 1;

    const std::int64_t width = (ya_hi - ya_lo) + (yb_hi - yb_lo) + 1;
    std::size_t count_bits = bits_of(Integer(static_cast<unsigned long>(std::min(nnz_a, nnz_b))));
    const std::size_t bits = bits_a + bits_b + count_bits + 2;
    const std::size_t limbs = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;

    KroneckerLayout la{qa0, step, ya_lo, (qa_hi - qa0) / step + 1};
    KroneckerLayout lb{qb0, step, yb_lo, (qb_hi - qb0) / step + 1};
    const Integer pa = pack(a, la, width, limbs, a_limit);
    const Integer pb = pack(b, lb, width, limbs, b_limit);
    Integer prod = pa * pb;
    const int sign = sgn(prod);
    BiSeries out(a.q_den(), a.y_den(), t);
    if (sign == 0) return out;
    if (sign < 0) prod = -prod;

    const std::int64_t out_rows = la.nrows + lb.nrows - 1;
    const std::size_t slots = static_cast<std::size_t>(out_rows * width);
    std::vector<mp_limb_t> limb_buf(slots * limbs + 1, 0);
    std::size_t written = 0;
    mpz_export(limb_buf.data(), &written, -1, sizeof(mp_limb_t), 0, 0, prod.get_mpz_t());

    Integer half, full;
    mpz_setbit(half.get_mpz_t(), limbs * GMP_NUMB_BITS - 1);
    mpz_setbit(full.get_mpz_t(), limbs * GMP_NUMB_BITS);
    auto& rows = SeriesAccess::rows(out);
    bool carry = false;
    Integer u;
    for (std::int64_t ri = 0; ri < out_rows; ++ri) {
        const std::int64_t q = qa0 + qb0 + ri * step;
        const bool keep = !t || q < *t;
        Row r;
        r.y_lo = ya_lo + yb_lo;
        if (keep) r.c.assign(static_cast<std::size_t>(width), Integer(0));
        for (std::int64_t yi = 0; yi < width; ++yi) {
            const std::size_t slot = static_cast<std::size_t>(ri * width + yi);
            mpz_import(u.get_mpz_t(), limbs, -1, sizeof(mp_limb_t), 0, 0, &limb_buf[slot * limbs]);
            if (carry) u += 1;
            if (u >= half) {
                u -= full;
                carry = true;
            } else {
                carry = false;
            }
            if (keep && u != 0) r.c[static_cast<std::size_t>(yi)] = sign < 0 ? Integer(-u) : u;
        }
        if (!keep) continue;
        trim(r);
        if (!r.c.empty()) rows.emplace_hint(rows.end(), q, std::move(r));
    }
    return out;
}

BiSeries mul(const BiSeries& a, const BiSeries& b) {
    if (a.empty() || b.empty()) return mul_schoolbook(a, b);
    // Estimate the schoolbook work; dense products go through one big-integer multiplication.
    const OptTrunc t = product_trunc(a, b);
    const std::int64_t fa = lcm(a.q_den(), b.q_den()) / a.q_den();
    const std::int64_t fb = lcm(a.q_den(), b.q_den()) / b.q_den();
    double work = 0;
    std::size_t rows_a = 0, rows_b = 0, width_a = 0, width_b = 0;
    for (const auto& [q, r] : a.rows()) {
        ++rows_a;
        width_a = std::max(width_a, r.c.size());
    }
    for (const auto& [q, r] : b.rows()) {
        ++rows_b;
        width_b = std::max(width_b, r.c.size());
    }
    for (const auto& [qa, ra] : a.rows()) {
        for (const auto& [qb, rb] : b.rows()) {
            if (t && qa * fa + qb * fb >= *t) break;
            work += static_cast<double>(ra.c.size()) * static_cast<double>(rb.c.size());
        }
    }
    const double slots = static_cast<double>(rows_a + rows_b) * static_cast<double>(width_a + width_b);
    if (work > 20000.0 && work > 16.0 * slots) return mul_kronecker(a, b);
    return mul_schoolbook(a, b);
}

BiSeries divide(const BiSeries& num0, const BiSeries& den0) {
    auto [num, den] = harmonize(num0, den0);
    if (den.empty()) throw InvalidArgument("divide: zero denominator");
    if (num.is_exact() && den.is_exact())
        throw InvalidArgument("divide: at least one operand must carry a truncation");
    const std::int64_t d0 = *den.min_q_num();
    if (is_exact_zero(num)) return BiSeries(num.q_den(), num.y_den(), plus(den.trunc_num(), -2 * d0));
    const std::int64_t n0 = *effective_min_q(num);
    const OptTrunc t = min_trunc(plus(num.trunc_num(), -d0), plus(den.trunc_num(), n0 - 2 * d0));
    BiSeries out(num.q_den(), num.y_den(), t);
    if (num.empty()) return out;

    std::int64_t step = 0;
    for (const auto& [q, r] : num.rows()) step = gcd(step, q - n0);
    for (const auto& [q, r] : den.rows()) {
        if (t && q - d0 >= *t - (n0 - d0)) break;
        step = gcd(step, q - d0);
    }
    if (step == 0) step = 1;

    const Row& lead = den.rows().begin()->second;
    auto& out_rows = SeriesAccess::rows(out);
    // out row at relative offset e sits at q = n0 - d0 + e
    for (std::int64_t e = 0; !t || n0 - d0 + e < *t; e += step) {
        Row acc;
        if (const Row* nr = num.row(n0 + e)) acc = *nr;
        for (const auto& [qd, rd] : den.rows()) {
            const std::int64_t ed = qd - d0;
            if (ed == 0) continue;
            if (ed > e) break;
            auto it = out_rows.find(n0 - d0 + e - ed);
            if (it == out_rows.end()) continue;
            row_submul(acc, rd, it->second);
        }
        trim(acc);
        if (acc.c.empty()) continue;
        Row qrow = row_divide_exact(acc, lead);
        if (!qrow.c.empty()) out_rows.emplace_hint(out_rows.end(), n0 - d0 + e, std::move(qrow));
    }
    return out;
}

BiSeries invert(const BiSeries& a) {
    if (a.is_exact()) throw InvalidArgument("invert: series must carry a finite truncation");
    if (a.empty()) throw NonUnitLeading("invert: series is zero to its truncation order");
    const Row& lead = a.rows().begin()->second;
    if (lead.c.size() != 1 || (lead.c[0] != 1 && lead.c[0] != -1)) {
        std::ostringstream msg;
        msg << "invert: leading q-coefficient is not +-y^k (q^" << exponent_str(*a.min_q_num(), a.q_den())
            << " coefficient has " << lead.c.size() << " y-terms)";
        throw NonUnitLeading(msg.str());
    }
    return divide(BiSeries::constant(1, a.q_den(), a.y_den()), a);
}

BiSeries pow(const BiSeries& a, std::int64_t k) {
    if (k < 0) return pow(invert(a), -k);
    BiSeries result = BiSeries::constant(1, a.q_den(), a.y_den());
    if (k == 0) return result;
    BiSeries base = a;
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            result = first ? base : mul(result, base);
            first = false;
        }
        k >>= 1;
        if (k > 0) base = mul(base, base);
    }
    return result;
}

Integer coeff_at(const BiSeries& a, const Rational& q_exp, const Rational& y_exp) {
    if (auto t = a.q_trunc(); t && q_exp >= *t) {
        std::ostringstream msg;
        msg << "coefficient at q^" << q_exp.get_str() << " requested, series known below q^" << t->get_str();
        throw BeyondTruncation(msg.str());
    }
    Rational qs = q_exp * a.q_den();
    Rational ys = y_exp * a.y_den();
    if (qs.get_den() != 1 || ys.get_den() != 1) return 0;
    return a.stored(qs.get_num().get_si(), ys.get_num().get_si());
}

BiSeries normalize_integral(const BiSeries& a) {
    std::optional<std::int64_t> t;
    if (a.trunc_num()) t = ceil_div(*a.trunc_num(), a.q_den());
    BiSeries out(1, 1, t);
    auto& rows = SeriesAccess::rows(out);
    for (const auto& [q, r] : a.rows()) {
        if (q % a.q_den() != 0) {
            std::ostringstream msg;
            msg << "term with q-exponent " << exponent_str(q, a.q_den()) << " is not integral";
            throw NonIntegralExponent(msg.str());
        }
        Row nr;
        for (std::size_t i = 0; i < r.c.size(); ++i) {
            if (r.c[i] == 0) continue;
            const std::int64_t y = r.y_lo + static_cast<std::int64_t>(i);
            if (y % a.y_den() != 0) {
                std::ostringstream msg;
                msg << "term q^" << exponent_str(q, a.q_den()) << " y^" << exponent_str(y, a.y_den())
                    << " has non-integral y-exponent";
                throw NonIntegralExponent(msg.str());
            }
        }
        const std::int64_t f = a.y_den();
        nr.y_lo = r.y_lo / f;
        nr.c.reserve(r.c.size() / static_cast<std::size_t>(f) + 1);
        for (std::size_t i = 0; i < r.c.size(); i += static_cast<std::size_t>(f)) nr.c.push_back(r.c[i]);
        rows.emplace_hint(rows.end(), q / a.q_den(), std::move(nr));
    }
    return out;
}

BiSeries divide_coefficients(const BiSeries& a, const Integer& d) {
    if (d == 0) throw InvalidArgument("divide_coefficients: division by zero");
    BiSeries out = a;
    for (auto& [q, r] : SeriesAccess::rows(out)) {
        for (Integer& x : r.c) {
            if (!mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()))
                throw NonIntegralDivision("coefficient " + x.get_str() + " not divisible by " + d.get_str());
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
        }
    }
    return out;
}

BiSeries substitute_y_power(const BiSeries& a, std::int64_t alpha) {
    if (alpha <= 0) throw InvalidArgument("substitute_y_power: alpha must be positive");
    if (alpha == 1) return a;
    BiSeries out(a.q_den(), a.y_den(), a.trunc_num());
    auto& rows = SeriesAccess::rows(out);
    for (const auto& [q, r] : a.rows()) {
        Row nr;
        nr.y_lo = r.y_lo * alpha;
        nr.c.assign((r.c.size() - 1) * static_cast<std::size_t>(alpha) + 1, Integer(0));
        for (std::size_t i = 0; i < r.c.size(); ++i) nr.c[i * static_cast<std::size_t>(alpha)] = r.c[i];
        rows.emplace_hint(rows.end(), q, std::move(nr));
    }
    return out;
}

BiSeries shift(const BiSeries& a, std::int64_t q_num, std::int64_t y_num) {
    BiSeries out(a.q_den(), a.y_den(), a.trunc_num() ? std::optional<std::int64_t>(*a.trunc_num() + q_num) : std::nullopt);
    auto& rows = SeriesAccess::rows(out);
    for (const auto& [q, r] : a.rows()) {
        Row nr = r;
        nr.y_lo += y_num;
        rows.emplace_hint(rows.end(), q + q_num, std::move(nr));
    }
    return out;
}

std::size_t max_coeff_bits(const BiSeries& a) {
    std::size_t best = 0;
    for (const auto& [q, r] : a.rows())
        for (const Integer& x : r.c) best = std::max(best, bits_of(x));
    return best;
}

}  // namespace wjf
