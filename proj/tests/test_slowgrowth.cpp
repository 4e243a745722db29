#include <gtest/gtest.h>

#include <algorithm>

#include "wjf/slowgrowth.hpp"
#include "wjf/thetaquot.hpp"

using namespace wjf;

namespace {

// Direct sum over a generous r-range, reading coefficients through coeff().
Integer brute_f(const JacobiForm& phi, const PolarAnchor& A, std::int64_t n, std::int64_t l) {
    Integer s = 0;
    for (std::int64_t r = -400; r <= 400; ++r) {
        const std::int64_t np = n * r + A.a * r * r, lp = l - A.b * r;
        if (4 * A.m * np - lp * lp < -A.m * A.m) continue;
        s += coeff(phi, np, lp);
    }
    return s;
}

JacobiForm phi6(std::int64_t order) { return theta_quotient_form({{4}, {2}}, order); }

}  // namespace

TEST(SlowGrowth, AnchorMustBePolar) {
    EXPECT_NO_THROW(PolarAnchor(1, 5, 6));
    EXPECT_THROW(PolarAnchor(1, 4, 6), InvalidArgument);
    EXPECT_THROW(PolarAnchor(0, 0, 6), InvalidArgument);
}

TEST(SlowGrowth, AlphaValues) {
    // m = 1, b = 1, term y: -(0 - 1/2)^2 + 1/4 = 0
    EXPECT_EQ(alpha_value(1, 1, 0, 1), 0);
    // m = 4, b = 1, y^4: -4 (1/2)^2 + 16/16 = 0
    EXPECT_EQ(alpha_value(4, 1, 0, 4), 0);
    // m = 4, b = 2, y^4: j = 1 gives -4 (1/2 - 1/2)^2 + 1 = 1
    EXPECT_EQ(alpha_value(4, 2, 0, 4), 1);
    EXPECT_EQ(alpha_value(6, 1, 0, 1), 0);
    EXPECT_EQ(alpha_value(6, 2, 0, 5), 1);
    EXPECT_EQ(alpha_value(6, 1, 1, 5), Rational(-1, 1) * 6 * Rational(25, 144) + Rational(1, 24));
}

TEST(SlowGrowth, LowerBoundHolds) {
    for (int m = 1; m <= 20; ++m) {
        const auto basis = basis_J0m(m, polar_order(m));
        for (std::int64_t b = 1; b * b <= m; ++b) EXPECT_GE(dim_slow_0b(basis, b), j_minus_bound(m, b)) << m << "," << b;
    }
}

TEST(SlowGrowth, LowerBoundValues) {
    EXPECT_EQ(j_minus_bound(1, 1), 1);
    EXPECT_EQ(j_minus_bound(6, 1), 1);
    EXPECT_EQ(rho(6, 1), 6);
}

TEST(SlowGrowth, SmallTableRows) {
    EXPECT_EQ(dim_slow_0b(1, 1, polar_order(1)), 1);
    EXPECT_EQ(dim_slow_0b(4, 2, polar_order(4)), 2);
    EXPECT_EQ(dim_slow_0b(17, 3, polar_order(17)), 0);
    EXPECT_EQ(dim_slow_0b(17, 4, polar_order(17)), 2);
}

TEST(SlowGrowth, WindowCoversEveryNonzeroSummand) {
    const JacobiForm f = phi_generator(2, 60);
    const PolarAnchor A(0, 1, 2), B(1, 3, 2);
    const CoefficientFunction cf = to_coefficient_function(f);
    for (const PolarAnchor& anchor : {A, B})
        for (std::int64_t n = -2; n <= 2; ++n)
            for (std::int64_t l = -3; l <= 3; ++l) {
                if (f_window(anchor, n, l).required_order > 60) continue;
                EXPECT_EQ(f_ab(cf, anchor, n, l), brute_f(f, anchor, n, l)) << n << "," << l;
            }
}

TEST(SlowGrowth, FReportsRequiredOrder) {
    const JacobiForm f = phi6(20);
    const CoefficientFunction cf = to_coefficient_function(f);
    const PolarAnchor A(1, 5, 6);
    const FWindow w = f_window(A, 3, 10);
    ASSERT_GT(w.required_order, 20);
    try {
        f_ab(cf, A, 3, 10);
        FAIL();
    } catch (const BeyondTruncation& e) {
        EXPECT_EQ(e.required_order(), w.required_order);
    }
    // exactly the reported order suffices
    const CoefficientFunction big = to_coefficient_function(phi6(w.required_order));
    EXPECT_NO_THROW(f_ab(big, A, 3, 10));
}

TEST(SlowGrowth, Phi6GeneratingValues) {
    const CoefficientFunction cf = to_coefficient_function(phi6(required_order_for_grid(PolarAnchor(0, 1, 6), 5, 12)));
    for (std::int64_t n = 0; n <= 5; ++n)
        for (std::int64_t l = -12; l <= 12; ++l) {
            const int expect = (n == 0 || 6 * n + l == 0) ? 2 : 0;
            EXPECT_EQ(f_ab(cf, PolarAnchor(0, 1, 6), n, l), expect) << n << "," << l;
        }
}

TEST(SlowGrowth, ClassifyPhi01) {
    const CoefficientFunction cf = to_coefficient_function(phi_generator(1, 30));
    const GrowthSample s = classify_growth(cf, PolarAnchor(0, 1, 1), 3, 2);
    EXPECT_EQ(s.classification, Growth::Slow);
    EXPECT_EQ(s.lines, (std::vector<SupportLine>{{1, 0}, {1, 1}}));
}

TEST(SlowGrowth, ClassifyFastForm) {
    // y^2 in phi_{0,1}^2 has alpha = 1/2 about b = 2
    const auto basis = basis_J0m(2, 60);
    const CoefficientFunction cf = to_coefficient_function(basis.front().form);
    const PolarAnchor A(0, 2, 2);
    const GrowthSample s = classify_growth(cf, A, 3, 4);
    EXPECT_EQ(s.classification, Growth::Fast);
}

TEST(SlowGrowth, SupportLineDetection) {
    std::vector<GridValue> g = {{0, 0, 5}, {1, -2, 1}, {2, -4, 1}, {0, 3, 2}};
    auto lines = support_lines(g);
    ASSERT_TRUE(lines);
    EXPECT_EQ(lines->size(), 2u);
    g.push_back({1, 1, 1});
    EXPECT_FALSE(support_lines(g));
}

TEST(SlowGrowth, ClassificationRules) {
    const PolarAnchor A(0, 1, 1);
    std::vector<GridValue> fast;
    for (std::int64_t n = 0; n <= 3; ++n)
        for (std::int64_t l = -1; l <= 1; ++l) fast.push_back({n, l, Integer(1) << static_cast<mp_bitcnt_t>(4 * n + 2)});
    EXPECT_EQ(classify_values(A, fast).classification, Growth::Fast);
    // big but not increasing: neither rule applies
    std::vector<GridValue> flat;
    for (std::int64_t n = 0; n <= 3; ++n)
        for (std::int64_t l = -1; l <= 1; ++l) flat.push_back({n, l, 5000});
    EXPECT_EQ(classify_values(A, flat).classification, Growth::Inconclusive);
    // small values on three lines
    std::vector<GridValue> three = {{1, 0, 1}, {1, 1, 1}, {1, -1, 1}};
    EXPECT_EQ(classify_values(A, three).classification, Growth::Inconclusive);
}

TEST(SlowGrowth, CyclotomicPolynomials) {
    EXPECT_EQ(cyclotomic_polynomial(1), (IntVector{-1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(2), (IntVector{1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(3), (IntVector{1, 1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(4), (IntVector{1, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(6), (IntVector{1, -1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(12), (IntVector{1, 0, -1, 0, 1}));
    for (std::int64_t d = 1; d <= 30; ++d) EXPECT_EQ(static_cast<std::int64_t>(cyclotomic_polynomial(d).size()) - 1, euler_phi(d));
}

TEST(SlowGrowth, ChiSpecialisationPermutesResidues) {
    const JacobiForm f = phi_generator(2, 8);
    const CycloSeries g = chi_generic(f, 3, 1);
    EXPECT_EQ(g.q_den, 9);
    const CycloSeries s = g.specialize(2);
    for (const auto& [e, v] : g.coeffs) {
        const IntVector& w = s.coeffs.at(e);
        for (std::int64_t t = 0; t < 3; ++t) EXPECT_EQ(w[static_cast<std::size_t>((2 * t) % 3)], v[static_cast<std::size_t>(t)]);
    }
}

TEST(SlowGrowth, AlphaTestAgreesWithChiRegularity) {
    // forms whose polar terms have polarity at most b^2, plus pairwise sums
    int tested = 0;
    for (int m = 1; m <= 8; ++m) {
        for (std::int64_t b = 1; b <= 2; ++b) {
            const auto basis = basis_J0m(m, std::max(polar_order(m), chi_required_order(m, b)));
            std::vector<IntVector> coords = max_polarity_space(basis, b * b);
            const std::size_t k = coords.size();
            for (std::size_t i = 0; i + 1 < k; ++i) {
                IntVector s(basis.size());
                for (std::size_t c = 0; c < s.size(); ++c) s[c] = coords[i][c] + coords[i + 1][c];
                coords.push_back(s);
            }
            for (const IntVector& v : slow_0b_kernel(basis, b)) coords.push_back(v);
            for (const IntVector& v : coords) {
                const JacobiForm f = combine(basis, v);
                EXPECT_EQ(passes_alpha_test(f, b), chi_regular(f, b)) << "m=" << m << " b=" << b;
                ++tested;
            }
        }
    }
    EXPECT_GE(tested, 20);
}

TEST(SlowGrowth, AlphaTestCanMissCancellations) {
    // phi01^2 phi03 has y^3 and q y^5 with alpha = 1/4 about b = 2, yet their
    // contributions to chi cancel against other terms of the same class.
    const auto basis = basis_J0m(5, chi_required_order(5, 2));
    const auto it = std::find_if(basis.begin(), basis.end(),
                                 [](const BasisElement& e) { return e.exps == MonomialExponents{2, 0, 1}; });
    ASSERT_NE(it, basis.end());
    EXPECT_EQ(alpha_value(5, 2, 0, 3), Rational(1, 4));
    EXPECT_FALSE(passes_alpha_test(it->form, 2));
    EXPECT_TRUE(chi_regular(it->form, 2));
}

TEST(SlowGrowth, GeneratingSeriesMatchesDirectSums) {
    EXPECT_GT(check_F_against_direct(phi_generator(1, 12), 1, 3, 4), 0u);
    EXPECT_GT(check_F_against_direct(phi6(12), 1, 2, 12), 0u);
    const auto basis = basis_J0m(4, 10);
    for (const IntVector& v : slow_0b_kernel(basis, 2))
        EXPECT_GT(check_F_against_direct(combine(basis, v), 2, 3, 8), 0u);
}

TEST(SlowGrowth, GeneratingSeriesOfPhi01IsConstant) {
    const BiSeries F = generating_F(phi_generator(1, 12), 1, 0, 0);
    const auto terms = F.terms();
    ASSERT_EQ(terms.size(), 1u);
    EXPECT_EQ(terms.front().q_num, 0);
    EXPECT_EQ(terms.front().coeff, 12);
    const auto t6 = generating_F(phi6(12), 1, 0, 0).terms();
    ASSERT_EQ(t6.size(), 1u);
    EXPECT_EQ(t6.front().coeff, 2);
}

TEST(SlowGrowth, TransferIndex6) {
    EXPECT_TRUE(wsigma_transfer_check_6(phi6(120), 3));
    const auto basis = basis_J0m(6, 120);
    for (const BasisElement& e : basis) EXPECT_TRUE(wsigma_transfer_check_6(e.form, 2));
}

TEST(SlowGrowth, TransferIndex8) {
    // The discriminants on the two sides only line up when l is even; for odd
    // l the shift between the summation variables is a half-integer.
    const std::int64_t R = 2;
    std::int64_t need = 0;
    for (std::int64_t n = -R; n <= R; ++n)
        for (std::int64_t l = -R; l <= R; ++l) {
            need = std::max(need, f_window(PolarAnchor(1, 6, 8), 2 * n, 2 * l).required_order);
            need = std::max(need, f_window(PolarAnchor(0, 2, 8), 4 * n + 2 * l, -12 * n - 7 * l).required_order);
        }
    const auto basis = basis_J0m(8, need);
    std::size_t odd_failures = 0;
    for (const BasisElement& e : basis)
        for (const auto& [n, l] : wsigma_transfer_mismatches_8(e.form, R)) {
            EXPECT_NE(l % 2, 0) << "even l must agree: n=" << n << " l=" << l;
            ++odd_failures;
        }
    EXPECT_GT(odd_failures, 0u);
    EXPECT_FALSE(wsigma_transfer_check_8(basis.front().form, R));
}

TEST(SlowGrowth, HatJ) {
    EXPECT_TRUE(hatJ_nonempty(6, 0, 1, polar_order(6)));
    EXPECT_FALSE(hatJ_nonempty(17, 0, 3, polar_order(17)));  // the space is zero
    EXPECT_THROW(hatJ_nonempty(6, 1, 5, 20), BeyondTruncation);
}
