#include "wjf/exactla.hpp"

#include <algorithm>

#include "wjf/error.hpp"

namespace wjf {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

ExactMatrix ExactMatrix::from_rows(const std::vector<IntVector>& rows) {
    ExactMatrix m;
    for (const auto& r : rows) m.append_row(r);
    return m;
}

IntVector ExactMatrix::row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void ExactMatrix::append_row(const IntVector& r) {
    if (rows_ == 0 && data_.empty()) cols_ = r.size();
    if (r.size() != cols_) throw InvalidArgument("append_row: column count mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntVector mat_vec(const ExactMatrix& a, const IntVector& v) {
    if (v.size() != a.cols()) throw InvalidArgument("mat_vec: dimension mismatch");
    IntVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Integer acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (v[j] != 0) mpz_addmul(acc.get_mpz_t(), a(i, j).get_mpz_t(), v[j].get_mpz_t());
        out[i] = acc;
    }
    return out;
}

void make_primitive(IntVector& v) {
    Integer g = 0;
    for (const Integer& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return;
    auto lead = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
    if (*lead < 0) g = -g;
    for (Integer& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

namespace {

struct Echelon {
    ExactMatrix u;  // first `pivots.size()` rows are the echelon rows
    std::vector<std::size_t> pivots;
};

Echelon bareiss(const ExactMatrix& a) {
    Echelon e{a, {}};
    ExactMatrix& m = e.u;
    const std::size_t nr = m.rows(), nc = m.cols();
    Integer prev = 1;
    std::size_t r = 0;
    Integer t;
    for (std::size_t col = 0; col < nc && r < nr; ++col) {
        std::size_t piv = r;
        while (piv < nr && m(piv, col) == 0) ++piv;
        if (piv == nr) continue;
        if (piv != r)
            for (std::size_t j = 0; j < nc; ++j) std::swap(m(piv, j), m(r, j));
        const Integer& p = m(r, col);
        for (std::size_t i = r + 1; i < nr; ++i) {
            const Integer& lead = m(i, col);
            for (std::size_t j = col + 1; j < nc; ++j) {
                mpz_mul(t.get_mpz_t(), p.get_mpz_t(), m(i, j).get_mpz_t());
                mpz_submul(t.get_mpz_t(), lead.get_mpz_t(), m(r, j).get_mpz_t());
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, col) = 0;
        }
        prev = p;
        e.pivots.push_back(col);
        ++r;
    }
    return e;
}

std::vector<std::size_t> free_columns(std::size_t cols, const std::vector<std::size_t>& pivots) {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        if (k < pivots.size() && pivots[k] == j)
            ++k;
        else
            out.push_back(j);
    }
    return out;
}

IntVector clear_denominators(const std::vector<Rational>& x) {
    Integer l = 1;
    for (const Rational& q : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    IntVector v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Integer t = l / x[i].get_den();
        v[i] = x[i].get_num() * t;
    }
    make_primitive(v);
    return v;
}

// ---- arithmetic modulo a 62-bit prime ----

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

std::vector<std::uint64_t> reduce(const ExactMatrix& a, std::uint64_t p) {
    std::vector<std::uint64_t> out(a.rows() * a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[i * a.cols() + j] = mpz_fdiv_ui(a(i, j).get_mpz_t(), p);
    return out;
}

// Gauss-Jordan to reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref_mod(std::vector<std::uint64_t>& m, std::size_t nr, std::size_t nc, std::uint64_t p,
                                  bool reduce_above) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < nc && r < nr; ++col) {
        std::size_t piv = r;
        while (piv < nr && m[piv * nc + col] == 0) ++piv;
        if (piv == nr) continue;
        if (piv != r)
            for (std::size_t j = col; j < nc; ++j) std::swap(m[piv * nc + j], m[r * nc + j]);
        std::uint64_t* pr = &m[r * nc];
        const std::uint64_t inv = invmod(pr[col], p);
        for (std::size_t j = col; j < nc; ++j) pr[j] = mulmod(pr[j], inv, p);
        for (std::size_t i = reduce_above ? 0 : r + 1; i < nr; ++i) {
            if (i == r) continue;
            std::uint64_t* pi = &m[i * nc];
            const std::uint64_t f = pi[col];
            if (f == 0) continue;
            const std::uint64_t nf = p - f;
            for (std::size_t j = col; j < nc; ++j) {
                if (pr[j] == 0) continue;
                std::uint64_t v = pi[j] + mulmod(nf, pr[j], p);
                pi[j] = v >= p ? v - p : v;
            }
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

class PrimeStream {
public:
    PrimeStream() { mpz_ui_pow_ui(cur_.get_mpz_t(), 2, 62); }
    std::uint64_t next() {
        mpz_nextprime(cur_.get_mpz_t(), cur_.get_mpz_t());
        return mpz_get_ui(cur_.get_mpz_t());
    }

private:
    Integer cur_;
};

// Finds r/s = x (mod m) with |r|, s <= bound.
bool rational_reconstruct(const Integer& x, const Integer& m, const Integer& bound, Integer& num, Integer& den) {
    Integer r0 = m, r1, t0 = 0, t1 = 1, q, tmp;
    mpz_fdiv_r(r1.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    while (r1 > bound) {
        mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (abs(t1) > bound || t1 == 0) return false;
    Integer g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (g != 1) return false;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    num = r1;
    den = t1;
    return true;
}

// Reconstructs a rational vector from residues modulo m sharing a common
// denominator, which is discovered incrementally.
bool reconstruct_vector(const IntVector& residues, const Integer& m, IntVector& out) {
    Integer bound;
    mpz_fdiv_q_2exp(bound.get_mpz_t(), m.get_mpz_t(), 1);
    mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
    Integer half;
    mpz_fdiv_q_2exp(half.get_mpz_t(), m.get_mpz_t(), 1);
    Integer d = 1;
    std::vector<Rational> vals(residues.size());
    Integer x, num, den;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        x = d * residues[i];
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        if (x > half) x -= m;
        if (abs(x) <= bound) {
            vals[i] = Rational(x, d);
        } else {
            if (!rational_reconstruct(x, m, bound, num, den)) return false;
            d *= den;
            if (d > bound) return false;
            vals[i] = Rational(num, d);
        }
        vals[i].canonicalize();
    }
    out = clear_denominators(vals);
    return true;
}

}  // namespace

std::size_t rank_bareiss(const ExactMatrix& a) { return bareiss(a).pivots.size(); }

std::vector<IntVector> nullspace_bareiss(const ExactMatrix& a) {
    Echelon e = bareiss(a);
    const std::size_t nc = a.cols();
    std::vector<IntVector> basis;
    for (std::size_t f : free_columns(nc, e.pivots)) {
        std::vector<Rational> x(nc, Rational(0));
        x[f] = 1;
        for (std::size_t k = e.pivots.size(); k-- > 0;) {
            const std::size_t pc = e.pivots[k];
            Rational acc = 0;
            for (std::size_t j = pc + 1; j < nc; ++j)
                if (x[j] != 0) acc += Rational(e.u(k, j)) * x[j];
            x[pc] = -acc / Rational(e.u(k, pc));
        }
        basis.push_back(clear_denominators(x));
    }
    return basis;
}

std::size_t rank_mod_p(const ExactMatrix& a, std::uint64_t p) {
    std::vector<std::uint64_t> m = reduce(a, p);
    return rref_mod(m, a.rows(), a.cols(), p, false).size();
}

std::vector<IntVector> nullspace_multimodular(const ExactMatrix& a) {
    const std::size_t nr = a.rows(), nc = a.cols();
    if (nc == 0) return {};
    PrimeStream primes;
    bool have = false;
    std::vector<std::size_t> pivots, frees;
    std::vector<IntVector> residues;
    Integer modulus = 1;
    std::size_t used = 0, next_attempt = 1;
    for (;;) {
        const std::uint64_t p = primes.next();
        std::vector<std::uint64_t> m = reduce(a, p);
        std::vector<std::size_t> piv = rref_mod(m, nr, nc, p, true);
        if (have) {
            if (piv.size() < pivots.size()) continue;
            // The pivot set over Q is the lexicographically first one; larger rank or an
            // earlier pivot set means the previous primes were unlucky.
            bool better = piv.size() > pivots.size() || piv < pivots;
            if (!better && piv != pivots) continue;
            if (better) have = false;
        }
        if (!have) {
            have = true;
            pivots = piv;
            frees = free_columns(nc, pivots);
            residues.assign(frees.size(), IntVector(nc, Integer(0)));
            modulus = 1;
            used = 0;
            next_attempt = 1;
        }
        if (frees.empty()) return {};
        // Standard kernel vectors modulo p, then CRT into the running residues.
        const Integer mp = modulus;
        const std::uint64_t minv = invmod(mpz_fdiv_ui(mp.get_mpz_t(), p), p);
        for (std::size_t k = 0; k < frees.size(); ++k) {
            IntVector& x = residues[k];
            for (std::size_t j = 0; j < nc; ++j) {
                std::uint64_t target = 0;
                if (j == frees[k]) {
                    target = 1;
                } else {
                    auto it = std::lower_bound(pivots.begin(), pivots.end(), j);
                    if (it != pivots.end() && *it == j) {
                        const std::size_t row = static_cast<std::size_t>(it - pivots.begin());
                        const std::uint64_t v = m[row * nc + frees[k]];
                        target = v == 0 ? 0 : p - v;
                    }
                }
                const std::uint64_t cur = mpz_fdiv_ui(x[j].get_mpz_t(), p);
                const std::uint64_t diff = target >= cur ? target - cur : target + p - cur;
                const std::uint64_t h = mulmod(diff, minv, p);
                if (h != 0) mpz_addmul_ui(x[j].get_mpz_t(), mp.get_mpz_t(), h);
            }
        }
        mpz_mul_ui(modulus.get_mpz_t(), modulus.get_mpz_t(), p);
        ++used;
        if (used < next_attempt) continue;
        next_attempt = used + std::max<std::size_t>(1, used / 4);

        std::vector<IntVector> basis(frees.size());
        bool ok = true;
        for (std::size_t k = 0; k < frees.size() && ok; ++k) {
            ok = reconstruct_vector(residues[k], modulus, basis[k]);
            if (ok) {
                for (const Integer& y : mat_vec(a, basis[k]))
                    if (y != 0) {
                        ok = false;
                        break;
                    }
            }
        }
        if (ok) return basis;
    }
}

namespace {
bool small_enough_for_bareiss(const ExactMatrix& a) { return std::min(a.rows(), a.cols()) <= 48; }
}  // namespace

std::size_t rank(const ExactMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    if (small_enough_for_bareiss(a)) return rank_bareiss(a);
    return a.cols() - nullspace_multimodular(a).size();
}

std::vector<IntVector> nullspace(const ExactMatrix& a) {
    if (a.cols() == 0) return {};
    if (a.rows() == 0) {
        std::vector<IntVector> basis(a.cols(), IntVector(a.cols(), Integer(0)));
        for (std::size_t k = 0; k < a.cols(); ++k) basis[k][k] = 1;
        return basis;
    }
    if (small_enough_for_bareiss(a)) return nullspace_bareiss(a);
    return nullspace_multimodular(a);
}

bool functional_on_nullspace(const ExactMatrix& a, const IntVector& f) {
    if (f.size() != a.cols()) throw InvalidArgument("functional_on_nullspace: length mismatch");
    for (const IntVector& v : nullspace(a)) {
        Integer acc = 0;
        for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * v[j];
        if (acc != 0) return true;
    }
    return false;
}

}  // namespace wjf
