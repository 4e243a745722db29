// Acceptance run: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any failed. `--extended-only` runs the larger-index checks
// instead (table rows up to m = 61, index 54, and the j- comparison).

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "wjf/polarity.hpp"
#include "wjf/slowgrowth.hpp"
#include "wjf/thetaquot.hpp"

using namespace wjf;

namespace {

struct Row {
    std::int64_t m, b, dim;
};

// Slow growing dimensions about the most polar y^b, m <= 61. The second
// 16-row reads "16 2 2" in the published table; b = 3 is the only value
// consistent with the neighbouring rows and with the theta quotient table.
const std::vector<Row> kSlowTable = {
    {1, 1, 1},  {2, 1, 1},  {3, 1, 1},  {4, 1, 1},  {4, 2, 2},  {5, 2, 1},  {6, 1, 1},  {6, 2, 2},  {7, 2, 1},
    {8, 2, 2},  {9, 2, 1},  {9, 3, 3},  {10, 2, 1}, {10, 3, 2}, {11, 3, 1}, {12, 2, 2}, {12, 3, 3}, {13, 3, 1},
    {14, 3, 1}, {15, 2, 1}, {15, 3, 2}, {16, 2, 1}, {16, 3, 2}, {16, 4, 4}, {17, 3, 0}, {17, 4, 2}, {18, 3, 3},
    {18, 4, 3}, {19, 3, 1}, {19, 4, 1}, {20, 3, 1}, {20, 4, 4}, {21, 3, 1}, {21, 4, 2}, {22, 3, 1}, {22, 4, 2},
    {23, 4, 1}, {24, 2, 1}, {24, 3, 2}, {24, 4, 4}, {25, 4, 1}, {25, 5, 4}, {26, 4, 2}, {26, 5, 2}, {27, 3, 1},
    {27, 4, 1}, {27, 5, 2}, {28, 3, 1}, {28, 4, 3}, {28, 5, 2}, {29, 4, 1}, {29, 5, 1}, {30, 3, 1}, {30, 4, 2},
    {30, 5, 4}, {31, 4, 0}, {31, 5, 1}, {32, 4, 3}, {32, 5, 2}, {33, 4, 2}, {33, 5, 1}, {34, 4, 1}, {34, 5, 1},
    {35, 4, 0}, {35, 5, 3}, {36, 3, 1}, {36, 4, 3}, {36, 5, 2}, {36, 6, 7}, {37, 5, 0}, {37, 6, 3}, {38, 5, 1},
    {38, 6, 3}, {39, 4, 0}, {39, 5, 1}, {39, 6, 4}, {40, 4, 2}, {40, 5, 3}, {40, 6, 4}, {41, 5, 0}, {41, 6, 1},
    {42, 4, 1}, {42, 5, 2}, {42, 6, 6}, {43, 5, 0}, {43, 6, 3}, {44, 5, 2}, {44, 6, 3}, {45, 4, 1}, {45, 5, 2},
    {45, 6, 4}, {46, 5, 1}, {46, 6, 3}, {47, 5, 0}, {47, 6, 1}, {48, 4, 2}, {48, 5, 2}, {48, 6, 6}, {49, 6, 2},
    {49, 7, 5}, {50, 5, 4}, {50, 6, 2}, {50, 7, 3}, {51, 4, 0}, {51, 5, 1}, {51, 6, 3}, {51, 7, 3}, {52, 5, 1},
    {52, 6, 3}, {52, 7, 2}, {53, 6, 0}, {53, 7, 2}, {54, 3, 1}, {54, 4, 1}, {54, 5, 1}, {54, 6, 6}, {54, 7, 2},
    {55, 5, 1}, {55, 6, 2}, {55, 7, 1}, {56, 5, 0}, {56, 6, 2}, {56, 7, 5}, {57, 5, 0}, {57, 6, 2}, {57, 7, 2},
    {58, 5, 0}, {58, 6, 3}, {58, 7, 2}, {59, 6, 0}, {59, 7, 1}, {60, 4, 1}, {60, 5, 3}, {60, 6, 5}, {60, 7, 3},
    {61, 6, 1}, {61, 7, 0},
};

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) note << "; ";
            pass = false;
            note << what;
        }
    }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << name;
    std::cout << " (" << std::fixed;
    std::cout.precision(1);
    std::cout << secs << "s)";
    if (!o.pass) std::cout << ": " << o.note.str();
    std::cout << std::endl;
}

std::string str(std::int64_t m, std::int64_t b) { return "(" + std::to_string(m) + "," + std::to_string(b) + ")"; }

std::map<std::int64_t, Integer> q0_row(const JacobiForm& f) {
    std::map<std::int64_t, Integer> out;
    for (const auto& t : f.series.terms())
        if (t.q_num == 0) out[t.y_num] = t.coeff;
    return out;
}

const std::vector<BasisElement>& basis_at_polar_order(std::int64_t m) {
    static std::map<std::int64_t, std::vector<BasisElement>> memo;
    auto it = memo.find(m);
    if (it == memo.end()) it = memo.emplace(m, basis_J0m(static_cast<int>(m), polar_order(m))).first;
    return it->second;
}

// Table rows up to m_max: dimensions and the reported set of b.
void check_slow_table(Outcome& o, std::int64_t m_max) {
    std::map<std::int64_t, std::set<std::int64_t>> listed;
    for (const Row& r : kSlowTable)
        if (r.m <= m_max) listed[r.m].insert(r.b);
    for (std::int64_t m = 1; m <= m_max; ++m) {
        const auto& basis = basis_at_polar_order(m);
        const std::int64_t P = P_of_m(m, basis);
        std::set<std::int64_t> reported;
        for (std::int64_t b = 1; b * b <= m; ++b)
            if (b * b >= P) reported.insert(b);
        o.expect(reported == listed[m], "b-set differs at m=" + std::to_string(m));
    }
    for (const Row& r : kSlowTable) {
        if (r.m > m_max) continue;
        const std::int64_t d = dim_slow_0b(basis_at_polar_order(r.m), r.b);
        o.expect(d == r.dim, "dim" + str(r.m, r.b) + "=" + std::to_string(d) + " expected " + std::to_string(r.dim));
    }
}

void check_hatJ(Outcome& o, std::int64_t m_max) {
    for (const Row& r : kSlowTable) {
        if (r.m > m_max || r.dim == 0 || (r.m == 54 && r.b == 4)) continue;
        o.expect(hatJ_nonempty(basis_at_polar_order(r.m), 0, r.b), "hatJ empty at " + str(r.m, r.b));
    }
}

void run_core() {
    report(1, "generator q^0 rows and basis invariants for m <= 12", [](Outcome& o) {
        using R = std::map<std::int64_t, Integer>;
        o.expect(q0_row(phi_generator(1, 12)) == R{{-1, 1}, {0, 10}, {1, 1}}, "phi01 q^0 row");
        o.expect(q0_row(phi_generator(2, 12)) == R{{-1, 1}, {0, 4}, {1, 1}}, "phi02 q^0 row");
        o.expect(q0_row(phi_generator(3, 12)) == R{{-1, 1}, {0, 2}, {1, 1}}, "phi03 q^0 row");
        for (int m = 1; m <= 12; ++m) {
            const auto basis = basis_J0m(m, 12);
            o.expect(static_cast<std::int64_t>(basis.size()) == dim_J0m(m), "basis size at m=" + std::to_string(m));
            for (const BasisElement& e : basis) {
                try {
                    check_invariants(e.form);
                } catch (const Error& err) {
                    o.expect(false, "m=" + std::to_string(m) + ": " + err.what());
                }
            }
        }
    });

    report(2, "slow growing dimensions about y^b match the table for m <= 24",
           [](Outcome& o) { check_slow_table(o, 24); });

    report(3, "affine slow space nonempty for every table row with m <= 24 and dim > 0",
           [](Outcome& o) { check_hatJ(o, 24); });

    report(4, "P-(m) <= P(m) = P+(m) for m <= 30", [](Outcome& o) {
        for (std::int64_t m = 1; m <= 30; ++m) {
            const std::int64_t P = P_of_m(m, basis_at_polar_order(m));
            o.expect(P_minus(m) <= P, "P- > P at m=" + std::to_string(m));
            o.expect(P == P_plus(m), "P != P+ at m=" + std::to_string(m));
        }
    });

    report(5, "|P+(m) - m/2| <= 2.1016 sqrt(m) for m <= 1000", [](Outcome& o) {
        for (std::int64_t m = 1; m <= 1000; ++m) {
            const double dev = std::abs(static_cast<double>(P_plus(m)) - static_cast<double>(m) / 2.0);
            o.expect(dev <= 2.1016 * std::sqrt(static_cast<double>(m)), "m=" + std::to_string(m));
        }
    });

    report(6, "index 6: f_{0,1}, f_{1,5}, W_3 eigenvalue and transfer", [](Outcome& o) {
        const PolarAnchor A01(0, 1, 6), A15(1, 5, 6);
        const std::int64_t order =
            std::max(required_order_for_grid(A01, 5, 12), required_order_for_grid(A15, 3, 10));
        const JacobiForm phi6 = theta_quotient_form({{4}, {2}}, order);
        const CoefficientFunction cf = to_coefficient_function(phi6);
        for (std::int64_t n = 0; n <= 5; ++n)
            for (std::int64_t l = -12; l <= 12; ++l)
                o.expect(f_ab(cf, A01, n, l) == ((n == 0 || 6 * n + l == 0) ? 2 : 0), "f01" + str(n, l));
        for (std::int64_t n = 0; n <= 3; ++n)
            for (std::int64_t l = -10; l <= 10; ++l)
                o.expect(f_ab(cf, A15, n, l) == ((2 * n + l == 0 || 3 * n + l == 0) ? -2 : 0), "f15" + str(n, l));
        const CoefficientFunction w = apply_W_sigma(cf, ResiduePermutation::multiplication(6, 5));
        o.expect(w.agrees_with(cf.negated()), "W_3 phi6 != -phi6");
        o.expect(wsigma_transfer_check_6(phi6, 3), "transfer check");
    });

    report(7, "theta quotient families have zero slow condition", [](Outcome& o) {
        for (std::int64_t beta = 1; beta <= 8; ++beta)
            for (std::int64_t k = 1; k <= 8; ++k) {
                if (k % 2 != 0 && beta % 2 != 0) continue;
                const ThetaQuotientSpec s{{(k + 1) * beta}, {beta}};
                const std::int64_t b = index_and_b(s).second;
                for (std::int64_t r = 0; r < b; ++r)
                    o.expect(slow_condition_value(s, r) == 0, s.to_string() + " r=" + std::to_string(r));
            }
        for (std::int64_t k = 1; k <= 12; ++k) {
            const ThetaQuotientSpec s = ks_quotient(k);
            for (std::int64_t r = 0; r < k; ++r)
                o.expect(slow_condition_value(s, r) == 0, s.to_string() + " r=" + std::to_string(r));
        }
    });

    report(8, "theta quotient span dimensions at N_max = 5", [](Outcome& o) {
        const std::vector<Row> expect = {{3, 1, 1}, {4, 1, 1}, {6, 1, 1}, {6, 2, 1}, {12, 2, 2}, {18, 2, 1}, {24, 2, 2}};
        for (const Row& r : expect) {
            const std::int64_t d = span_dimension(enumerate_slow_quotients(r.m, r.b, 5));
            o.expect(d == r.dim, "dim" + str(r.m, r.b) + "=" + std::to_string(d));
        }
    });

    report(9, "slow spaces about q^a y^b (m = 5, 6, 8) and the m = 9 contrast", [](Outcome& o) {
        const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::size_t>> rows = {
            {5, 1, 5, 1}, {6, 1, 5, 1}, {8, 1, 6, 2}};
        for (const auto& [m, a, b, dim] : rows) {
            const PolarAnchor A(a, b, m);
            const auto basis = basis_J0m(static_cast<int>(m), std::max(polar_order(m), required_order_for_grid(A, 3, 2 * m)));
            const SlowSpaceEstimate est = estimate_slow_space(basis, A, 3, 2 * m);
            o.expect(est.slow.size() == dim, "dim at m=" + std::to_string(m) + " is " + std::to_string(est.slow.size()));
            for (const GrowthSample& s : est.slow_samples)
                o.expect(s.classification == Growth::Slow, "slow vector not Slow at m=" + std::to_string(m));
            for (const GrowthSample& s : est.other_samples)
                o.expect(s.classification == Growth::Fast, "complement not Fast at m=" + std::to_string(m));
            o.expect(hatJ_nonempty(basis, a, b), "affine space empty at m=" + std::to_string(m));
        }
        // m = 9: forms slow about y^3 that are fast about q^2 y^9
        const PolarAnchor A29(2, 9, 9), A03(0, 3, 9);
        const std::int64_t order = std::max({polar_order(9), chi_required_order(9, 3), required_order_for_grid(A29, 3, 18),
                                             required_order_for_grid(A03, 3, 18)});
        const auto basis = basis_J0m(9, order);
        const SlowSpaceEstimate est = estimate_slow_space(basis, A29, 3, 18);
        o.expect(est.slow.size() == 2, "dim about q^2 y^9 is " + std::to_string(est.slow.size()));
        ExactMatrix span(0, basis.size());
        for (const IntVector& v : est.slow) span.append_row(v);
        const std::size_t base_rank = rank(span);
        int contrasts = 0;
        for (const IntVector& v : slow_0b_kernel(basis, 3)) {
            ExactMatrix with = span;
            with.append_row(v);
            if (rank(with) == base_rank) continue;
            const CoefficientFunction cf = to_coefficient_function(combine(basis, v));
            const JacobiForm f = combine(basis, v);
            const Growth about_y3 = classify_growth(cf, A03, 3, 18).classification;
            const Growth about_q2y9 = classify_growth(cf, A29, 3, 18).classification;
            // slow about y^3 holds exactly; the sampled label may be Inconclusive
            // when the bounded values take more than two magnitudes
            o.expect(chi_regular(f, 3), "kernel vector not regular about y^3");
            o.expect(about_y3 != Growth::Fast, "kernel vector labelled Fast about y^3");
            o.expect(about_q2y9 == Growth::Fast, "kernel vector not Fast about q^2 y^9");
            if (about_y3 == Growth::Slow && about_q2y9 == Growth::Fast) ++contrasts;
        }
        o.expect(contrasts > 0, "no form labelled Slow about y^3 and Fast about q^2 y^9");
    });

    report(10, "generating series vs direct sums; alpha-test vs chi-regularity", [](Outcome& o) {
        o.expect(check_F_against_direct(phi_generator(1, 10), 1, 3, 4) > 0, "phi01 comparisons");
        o.expect(check_F_against_direct(theta_quotient_form({{4}, {2}}, 10), 1, 2, 12) > 0, "phi6 comparisons");
        for (int m = 1; m <= 8; ++m) {
            for (std::int64_t b = 1; b <= 2; ++b) {
                const auto basis = basis_J0m(m, std::max(polar_order(m), chi_required_order(m, b)));
                // forms with no polar term beyond polarity b^2, pairwise sums, slow vectors
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
                    o.expect(passes_alpha_test(f, b) == chi_regular(f, b), "disagreement at " + str(m, b));
                }
            }
        }
    });
}

void run_extended() {
    report(2, "slow growing dimensions about y^b match the table for m <= 61",
           [](Outcome& o) { check_slow_table(o, 61); });

    report(3, "affine slow space: nonempty for table rows up to m = 61 with dim > 0, empty for (54,4)",
           [](Outcome& o) {
               check_hatJ(o, 61);
               o.expect(!hatJ_nonempty(basis_at_polar_order(54), 0, 4), "hatJ nonempty at (54,4)");
           });

    report(4, "P(54) = 9, P+(54) = 25; P(m) < P+(m) for m <= 61 exactly at 39, 51, 54, 58", [](Outcome& o) {
        const std::int64_t P = P_of_m(54, basis_at_polar_order(54));
        o.expect(P == 9, "P(54)=" + std::to_string(P));
        o.expect(P_plus(54) == 25, "P+(54)=" + std::to_string(P_plus(54)));
        for (std::int64_t m = 1; m <= 61; ++m) {
            const std::int64_t pm = P_of_m(m, basis_at_polar_order(m));
            o.expect(P_minus(m) <= pm && pm <= P_plus(m), "bounds fail at m=" + std::to_string(m));
            const bool gap = pm < P_plus(m);
            o.expect(gap == (m == 39 || m == 51 || m == 54 || m == 58), "gap pattern at m=" + std::to_string(m));
        }
    });

    report(11, "j-(m) <= 0 at m = 41, 47, 59 while dim about y^6 at m = 41 is 1", [](Outcome& o) {
        for (std::int64_t m : {41, 47, 59}) o.expect(j_minus(m) <= 0, "j-(" + std::to_string(m) + ")=" + std::to_string(j_minus(m)));
        const std::int64_t d = dim_slow_0b(basis_at_polar_order(41), 6);
        o.expect(d == 1, "dim(41,6)=" + std::to_string(d));
    });
}

}  // namespace

int main(int argc, char** argv) {
    const bool extended = argc > 1 && std::string(argv[1]) == "--extended-only";
    if (argc > 1 && !extended) {
        std::cerr << "usage: wjf_acceptance [--extended-only]\n";
        return 2;
    }
    if (extended)
        run_extended();
    else
        run_core();
    return failures == 0 ? 0 : 1;
}
