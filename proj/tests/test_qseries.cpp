#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wjf/forms.hpp"
#include "wjf/qseries.hpp"

using namespace wjf;

namespace {

std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(oracle::rng());
}

// Random series with q_num in [q0, q0 + rows), y_num in [-width, width].
BiSeries random_series(std::int64_t q0, std::int64_t rows, std::int64_t width, std::optional<std::int64_t> trunc,
                       std::int64_t coeff_range = 5, double density = 0.6) {
    BiSeries s(1, 1, trunc);
    std::bernoulli_distribution keep(density);
    for (std::int64_t q = q0; q < q0 + rows; ++q)
        for (std::int64_t y = -width; y <= width; ++y)
            if (keep(oracle::rng())) s.add_term(q, y, Integer(uniform(-coeff_range, coeff_range)));
    return s;
}

// Random truncated series whose leading q-coefficient is +-y^k.
BiSeries random_unit(std::int64_t trunc) {
    BiSeries s = random_series(1, trunc - 1, 3, trunc);
    s.add_term(0, uniform(-2, 2), Integer(uniform(0, 1) ? 1 : -1));
    return s;
}

}  // namespace

TEST(QSeries, ZeroCoefficientsAreDropped) {
    BiSeries s(1, 1);
    s.add_term(0, 1, 3);
    s.add_term(0, 1, -3);
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(s.term_count(), 0u);
}

TEST(QSeries, TermsPastTruncationAreDropped) {
    BiSeries s(1, 1, 4);
    s.add_term(4, 0, 1);
    s.add_term(3, 0, 1);
    EXPECT_EQ(s.term_count(), 1u);
}

TEST(QSeries, CoefficientBeyondTruncationThrows) {
    BiSeries s(1, 1, 5);
    s.add_term(2, 1, 7);
    EXPECT_EQ(coeff_at(s, 2, 1), 7);
    EXPECT_EQ(coeff_at(s, 4, 3), 0);
    EXPECT_THROW(coeff_at(s, 5, 0), BeyondTruncation);
    EXPECT_THROW(coeff_at(s, Rational(11, 2), 0), BeyondTruncation);
}

TEST(QSeries, RingAxiomsOnRandomSeries) {
    for (int iter = 0; iter < 40; ++iter) {
        const std::int64_t T = uniform(3, 8);
        const BiSeries a = random_series(0, T, 3, T), b = random_series(0, T, 3, T), c = random_series(0, T, 2, T);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).empty());
        EXPECT_EQ(a * BiSeries::constant(1), a);
    }
}

TEST(QSeries, ProductTruncationUsesLeadingExponents) {
    BiSeries a(1, 1, 10), b(1, 1, 6);
    a.add_term(2, 0, 1);
    b.add_term(1, 0, 1);
    // min(10 + 1, 6 + 2)
    EXPECT_EQ(*mul(a, b).trunc_num(), 8);
}

TEST(QSeries, KroneckerAgreesWithSchoolbook) {
    for (int iter = 0; iter < 30; ++iter) {
        const std::int64_t T = uniform(4, 25);
        const std::int64_t range = iter % 3 == 0 ? 1000000000000LL : 50;
        BiSeries a = random_series(uniform(-2, 2), T, uniform(1, 12), std::nullopt, range, 0.5);
        BiSeries b = random_series(uniform(-2, 2), T, uniform(1, 12), T + 3, range, 0.5);
        EXPECT_EQ(mul_schoolbook(a, b), mul_kronecker(a, b)) << "iteration " << iter;
        EXPECT_EQ(mul(a, b), mul_schoolbook(a, b));
    }
}

TEST(QSeries, KroneckerHandlesHalfIntegralExponents) {
    const BiSeries t = theta1(3, 12);
    EXPECT_EQ(mul_kronecker(t, t), mul_schoolbook(t, t));
}

TEST(QSeries, InverseRoundTrip) {
    for (int iter = 0; iter < 100; ++iter) {
        const std::int64_t T = uniform(2, 10);
        const BiSeries a = random_unit(T);
        const BiSeries inv = invert(a);
        const BiSeries one = a * inv;
        EXPECT_EQ(one, BiSeries::constant(1).truncated_num(*one.trunc_num())) << "iteration " << iter;
        EXPECT_GE(*one.trunc_num(), T);
    }
}

TEST(QSeries, InverseNeedsUnitLeadingTerm) {
    BiSeries a(1, 1, 5);
    a.add_term(0, 0, 2);
    EXPECT_THROW(invert(a), NonUnitLeading);
    BiSeries b(1, 1, 5);
    b.add_term(0, 0, 1);
    b.add_term(0, 1, 1);
    EXPECT_THROW(invert(b), NonUnitLeading);
}

TEST(QSeries, DivisionUndoesMultiplication) {
    for (int iter = 0; iter < 30; ++iter) {
        const std::int64_t T = uniform(3, 9);
        BiSeries d = random_series(1, T, 2, T + 2);
        d.add_term(0, 1, 1);
        d.add_term(0, -1, -1);  // non-monomial leading coefficient y - 1/y
        const BiSeries n = random_series(0, T, 3, T + 2);
        const BiSeries q = divide(n * d, d);
        EXPECT_EQ(q, n.truncated_num(*q.trunc_num()));
        EXPECT_GE(*q.trunc_num(), T);
    }
}

TEST(QSeries, InexactDivisionIsReported) {
    BiSeries n(1, 1, 4), d(1, 1, 4);
    n.add_term(0, 0, 1);
    d.add_term(0, 1, 1);
    d.add_term(0, 0, -1);
    EXPECT_THROW(divide(n, d), InexactDivision);
}

TEST(QSeries, NormalizeIntegralRejectsFractionalExponents) {
    BiSeries s(24, 2, 48);
    s.add_term(24, 2, 1);
    EXPECT_EQ(normalize_integral(s).q_den(), 1);
    s.add_term(3, 1, 1);
    EXPECT_THROW(normalize_integral(s), NonIntegralExponent);
}

TEST(QSeries, EtaMatchesEulerProduct) {
    const std::int64_t order = 200;
    const BiSeries e = eta(order);
    const auto ref = oracle::euler_product(order);
    for (std::int64_t n = 0; n + 1 < order; ++n)
        EXPECT_EQ(e.stored(24 * n + 1, 0), ref[static_cast<std::size_t>(n)]) << "q^" << n;
    EXPECT_THROW(coeff_at(e, order, 0), BeyondTruncation);
}

TEST(QSeries, Theta1MatchesProductFormula) {
    for (std::int64_t alpha : {1, 2, 3, 5}) {
        const std::int64_t order = 25;
        const BiSeries t = theta1(alpha, order);
        const oracle::Poly ref = oracle::theta1_product(alpha, order);
        ASSERT_EQ(t.q_den(), 24);
        ASSERT_EQ(t.y_den(), 2);
        std::size_t count = 0;
        for (const auto& term : t.terms()) {
            auto it = ref.find({term.q_num, term.y_num});
            ASSERT_NE(it, ref.end()) << "alpha " << alpha << " term q^" << term.q_num << " y^" << term.y_num;
            EXPECT_EQ(term.coeff, it->second);
            ++count;
        }
        EXPECT_EQ(count, ref.size()) << "alpha " << alpha;
    }
}

TEST(QSeries, PowerMatchesRepeatedProduct) {
    const BiSeries a = random_unit(7);
    EXPECT_EQ(pow(a, 3), a * a * a);
    const BiSeries one = pow(a, -2) * a * a;
    EXPECT_EQ(one, BiSeries::constant(1).truncated_num(*one.trunc_num()));
}
