#include <gtest/gtest.h>

#include "wjf/polarity.hpp"
#include "wjf/slowgrowth.hpp"
#include "wjf/thetaquot.hpp"

using namespace wjf;

TEST(ThetaQuot, ParseAndPrint) {
    const auto s = ThetaQuotientSpec::parse("3,4/1,2");
    EXPECT_EQ(s.nums, (std::vector<std::int64_t>{3, 4}));
    EXPECT_EQ(s.dens, (std::vector<std::int64_t>{1, 2}));
    EXPECT_EQ(s.to_string(), "3,4/1,2");
    EXPECT_THROW(ThetaQuotientSpec::parse("3,4"), InvalidArgument);
    EXPECT_THROW(ThetaQuotientSpec::parse("3,x/1,2"), InvalidArgument);
}

TEST(ThetaQuot, IndexAndB) {
    EXPECT_EQ(index_and_b({{4}, {2}}), (std::pair<std::int64_t, std::int64_t>(6, 1)));
    EXPECT_EQ(index_and_b(ks_quotient(3)), (std::pair<std::int64_t, std::int64_t>(18, 3)));
    EXPECT_THROW(index_and_b({{3}, {2}}), NonIntegral);
    EXPECT_THROW(index_and_b({{2}, {4}}), NonIntegral);
    EXPECT_THROW(index_and_b({{3, 1}, {2}}), InvalidArgument);
}

TEST(ThetaQuot, Holomorphy) {
    EXPECT_TRUE(is_holomorphic({{4}, {2}}));
    EXPECT_FALSE(is_holomorphic({{5}, {3}}));
    EXPECT_TRUE(is_holomorphic({{1, 4, 6}, {2, 2, 3}}));
    EXPECT_FALSE(is_holomorphic({{1, 1, 6}, {2, 2, 3}}));
}

TEST(ThetaQuot, SingleQuotientFamilyVanishes) {
    for (std::int64_t beta = 1; beta <= 8; ++beta)
        for (std::int64_t k = 1; k <= 8; ++k) {
            if (k % 2 != 0 && beta % 2 != 0) continue;
            const ThetaQuotientSpec s{{(k + 1) * beta}, {beta}};
            const auto [m, b] = index_and_b(s);
            EXPECT_EQ(m, beta * beta * k * (k + 2) / 2);
            EXPECT_EQ(b, k * beta / 2);
            for (std::int64_t r = 1; r < b; ++r) EXPECT_EQ(slow_condition_value(s, r), 0) << beta << " " << k << " " << r;
        }
}

TEST(ThetaQuot, KsFamilyVanishes) {
    for (std::int64_t k = 1; k <= 12; ++k) {
        const ThetaQuotientSpec s = ks_quotient(k);
        for (std::int64_t r = 1; r < k; ++r) EXPECT_EQ(slow_condition_value(s, r), 0) << k << " " << r;
        EXPECT_TRUE(is_slow_quotient(s));
    }
}

TEST(ThetaQuot, Phi6IsTheSlowForm) {
    const JacobiForm q = theta_quotient_form({{4}, {2}}, 10);
    EXPECT_NO_THROW(check_invariants(q));
    EXPECT_EQ(q.index_m, 6);
    const auto basis = basis_J0m(6, 10);
    const auto k = slow_0b_kernel(basis, 1);
    ASSERT_EQ(k.size(), 1u);
    const JacobiForm f = combine(basis, k.front());
    ASSERT_EQ(coeff(q, 0, 1), 1);
    const Integer c = coeff(f, 0, 1);
    ASSERT_NE(c, 0);
    EXPECT_EQ(divide_coefficients(f.series, c), q.series);
}

TEST(ThetaQuot, QuotientFormsAreWeakJacobiForms) {
    for (const std::string& text : {"3/1", "2,2/1,1", "5/1", "4,4/2,2", "1,4,6/2,2,3", "8/4", "1,1,6,6/2,2,3,3"}) {
        const auto spec = ThetaQuotientSpec::parse(text);
        const JacobiForm f = theta_quotient_form(spec, 8);
        EXPECT_NO_THROW(check_invariants(f)) << text;
        // q^0 row runs from y^-b to y^b with leading coefficient 1
        const auto b = index_and_b(spec).second;
        EXPECT_EQ(coeff(f, 0, b), 1) << text;
        EXPECT_EQ(coeff(f, 0, b + 1), 0) << text;
    }
}

TEST(ThetaQuot, SlowConditionAgreesWithChiRegularity) {
    // every holomorphic quotient with small entries
    int tested = 0;
    for (std::int64_t n1 = 1; n1 <= 7; ++n1)
        for (std::int64_t n2 = n1; n2 <= 7; ++n2)
            for (std::int64_t m1 = 1; m1 <= 4; ++m1)
                for (std::int64_t m2 = m1; m2 <= 4; ++m2) {
                    const ThetaQuotientSpec s{{n1, n2}, {m1, m2}};
                    std::pair<std::int64_t, std::int64_t> mb;
                    try {
                        mb = index_and_b(s);
                    } catch (const Error&) {
                        continue;
                    }
                    if (!is_holomorphic(s) || mb.first > 30) continue;
                    const JacobiForm f = theta_quotient_form(s, chi_required_order(mb.first, mb.second));
                    EXPECT_EQ(is_slow_quotient(s), chi_regular(f, mb.second)) << s.to_string();
                    ++tested;
                }
    EXPECT_GT(tested, 10);
}

TEST(ThetaQuot, EntryBound) {
    EXPECT_EQ(max_entry_bound(1), 6);
    EXPECT_EQ(max_entry_bound(2), 12);
    EXPECT_EQ(max_entry_bound(3), 18);
}

TEST(ThetaQuot, EnumerationIsReducedAndSlow) {
    for (const auto& [m, b] : std::vector<std::pair<std::int64_t, std::int64_t>>{{6, 1}, {12, 2}, {24, 2}}) {
        for (const ThetaQuotientSpec& s : enumerate_slow_quotients(m, b, 4)) {
            EXPECT_EQ(s, s.reduced());
            EXPECT_EQ(index_and_b(s), std::make_pair(m, b));
            EXPECT_TRUE(is_holomorphic(s));
            EXPECT_TRUE(is_slow_quotient(s));
        }
    }
}

TEST(ThetaQuot, SpanDimensions) {
    EXPECT_EQ(span_dimension(enumerate_slow_quotients(12, 2, 5)), 2);
    EXPECT_EQ(span_dimension({}), 0);
}
