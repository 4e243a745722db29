#include "wjf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "wjf/cache.hpp"
#include "wjf/polarity.hpp"
#include "wjf/slowgrowth.hpp"
#include "wjf/svg.hpp"
#include "wjf/thetaquot.hpp"

namespace fs = std::filesystem;

namespace wjf {

std::vector<std::int64_t> reported_b_values(std::int64_t m, std::int64_t P) {
    std::vector<std::int64_t> out;
    for (std::int64_t b = 1; b * b <= m; ++b)
        if (b * b >= P) out.push_back(b);
    return out;
}

namespace {

std::int64_t require(const std::optional<std::int64_t>& v, const char* flag) {
    if (!v) throw UsageError(std::string("missing --") + flag);
    return *v;
}

std::optional<MonomialExponents> parse_mono(const std::string& text) {
    MonomialExponents e{};
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> e[0] >> c1 >> e[1] >> c2 >> e[2]) || c1 != ',' || c2 != ',' || !in.eof()) return std::nullopt;
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + 2 * e[1] + 3 * e[2] == 0) return std::nullopt;
    return e;
}

// Index fixed by the form itself, if any.
std::optional<std::int64_t> form_index(const std::string& spec) {
    if (spec == "phi01") return 1;
    if (spec == "phi02") return 2;
    if (spec == "phi03") return 3;
    if (spec.rfind("mono:", 0) == 0) {
        auto e = parse_mono(spec.substr(5));
        if (!e) throw UsageError("bad --form " + spec + " (expected mono:A,B,C)");
        return (*e)[0] + 2 * (*e)[1] + 3 * (*e)[2];
    }
    if (spec.rfind("theta:", 0) == 0) {
        try {
            return index_and_b(ThetaQuotientSpec::parse(spec.substr(6))).first;
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("bad --form: ") + e.what());
        }
    }
    if (spec == "slow") return std::nullopt;
    throw UsageError("unknown --form " + spec);
}

std::int64_t index_of(const RunConfig& c) {
    const auto fixed = form_index(c.form);
    if (fixed && c.m && *c.m != *fixed) throw UsageError("--m does not match the index of --form " + c.form);
    if (fixed) return *fixed;
    const std::int64_t m = require(c.m, "m");
    if (m < 1) throw UsageError("--m must be positive");
    return m;
}

std::vector<std::int64_t> index_range(const RunConfig& c) {
    std::vector<std::int64_t> out;
    if (c.m_max) {
        if (*c.m_max < 1) throw UsageError("--m-max must be positive");
        for (std::int64_t m = 1; m <= *c.m_max; ++m) out.push_back(m);
    } else if (c.m) {
        if (*c.m < 1) throw UsageError("--m must be positive");
        out.push_back(*c.m);
    } else {
        throw UsageError("missing --m or --m-max");
    }
    return out;
}

// Order to use given a computed minimum; a user override below it aborts.
std::int64_t choose_order(const RunConfig& c, std::int64_t need) {
    if (!c.order) return need;
    if (*c.order < need) {
        std::ostringstream msg;
        msg << "--order " << *c.order << " is below the required order " << need;
        throw BeyondTruncation(msg.str(), static_cast<long>(need));
    }
    return *c.order;
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

std::string line_str(const SupportLine& s) {
    auto term = [](std::int64_t k, const char* var, bool first) {
        std::string out;
        if (k == 0) return out;
        if (k < 0)
            out += "-";
        else if (!first)
            out += "+";
        if (std::abs(k) != 1) out += std::to_string(std::abs(k));
        return out + var;
    };
    std::string e = term(s.e, "n", true);
    std::string f = term(s.f, "l", e.empty());
    return e + f + "=0";
}

// First coefficient (in (n, l) order) made positive.
JacobiForm normalized_sign(JacobiForm f) {
    const auto terms = f.series.terms();
    if (!terms.empty() && terms.front().coeff < 0) f.series = -f.series;
    return f;
}

std::int64_t slow_requirement(std::int64_t m, std::int64_t a, std::int64_t b) {
    std::int64_t need = polar_order(m);
    if (a > 0) need = std::max(need, required_order_for_grid(PolarAnchor(a, b, m), 3, 2 * m));
    return need;
}

struct Csv {
    std::ostringstream body;
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) body << (i ? "," : "") << cells[i];
        body << "\n";
    }
};

std::string str(std::int64_t v) { return std::to_string(v); }

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw InvalidArgument("cannot write " + p.string());
    out << text;
}

std::vector<BasisElement> polar_basis(std::int64_t m, const RunConfig& c, const std::optional<fs::path>& cache) {
    return cached_basis(m, choose_order(c, polar_order(m)), cache);
}

std::string run(const RunConfig& c, const std::optional<fs::path>& cache) {
    Csv csv;
    const std::string& cmd = c.command;

    if (cmd == "basis") {
        const std::int64_t m = require(c.m, "m");
        if (m < 1) throw UsageError("--m must be positive");
        const auto basis = cached_basis(m, choose_order(c, polar_order(m)), cache);
        csv.row({"alpha", "beta", "gamma", "n", "l", "coeff"});
        for (const BasisElement& e : basis)
            for (const auto& t : e.form.series.terms())
                csv.row({str(e.exps[0]), str(e.exps[1]), str(e.exps[2]), str(t.q_num), str(t.y_num), t.coeff.get_str()});
    } else if (cmd == "polar") {
        const std::int64_t m = require(c.m, "m");
        if (m < 1) throw UsageError("--m must be positive");
        std::vector<PolarTerm> terms = enumerate_polar_terms(m);
        std::stable_sort(terms.begin(), terms.end(), [](const PolarTerm& x, const PolarTerm& y) {
            return x.n != y.n ? x.n < y.n : x.l < y.l;
        });
        csv.row({"n", "l", "polarity"});
        for (const PolarTerm& t : terms) csv.row({str(t.n), str(t.l), str(t.polarity)});
    } else if (cmd == "pm") {
        csv.row({"m", "P"});
        for (std::int64_t m : index_range(c)) csv.row({str(m), str(P_of_m(m, polar_basis(m, c, cache)))});
    } else if (cmd == "pminus") {
        csv.row({"m", "P_minus"});
        for (std::int64_t m : index_range(c)) csv.row({str(m), str(P_minus(m))});
    } else if (cmd == "pplus") {
        csv.row({"m", "P_plus"});
        for (std::int64_t m : index_range(c)) csv.row({str(m), str(P_plus(m))});
    } else if (cmd == "jminus") {
        csv.row({"m", "j_minus"});
        for (std::int64_t m : index_range(c)) csv.row({str(m), str(j_minus(m))});
    } else if (cmd == "dims") {
        csv.row({"m", "b", "dim", "hat_nonempty"});
        for (std::int64_t m : index_range(c)) {
            const auto basis = polar_basis(m, c, cache);
            std::vector<std::int64_t> bs;
            if (c.b)
                bs.push_back(*c.b);
            else
                bs = reported_b_values(m, P_of_m(m, basis));
            for (std::int64_t b : bs) {
                if (b < 1) throw UsageError("--b must be positive");
                csv.row({str(m), str(b), str(dim_slow_0b(basis, b)), bool_str(hatJ_nonempty(basis, 0, b))});
            }
        }
    } else if (cmd == "f" || cmd == "classify") {
        const std::int64_t m = index_of(c);
        const std::int64_t a = c.a.value_or(0);
        const std::int64_t b = require(c.b, "b");
        const PolarAnchor anchor(a, b, m);
        const std::int64_t n_max = c.n_max.value_or(3), l_max = c.l_max.value_or(2 * m);
        if (n_max < 0 || l_max < 0) throw UsageError("--n-max and --l-max must be non-negative");
        std::int64_t need = std::max(required_order_for_grid(anchor, n_max, l_max), polar_order(m));
        if (c.form == "slow") need = std::max(need, slow_requirement(m, a, b));
        const std::int64_t order = choose_order(c, need);
        const CoefficientFunction cf = to_coefficient_function(resolve_form(c.form, m, a, b, order, cache));
        if (cmd == "f") {
            csv.row({"n", "l", "f"});
            for (std::int64_t n = 0; n <= n_max; ++n)
                for (std::int64_t l = -l_max; l <= l_max; ++l) csv.row({str(n), str(l), f_ab(cf, anchor, n, l).get_str()});
        } else {
            const GrowthSample s = classify_growth(cf, anchor, n_max, l_max);
            std::string lines;
            for (const SupportLine& ln : s.lines) lines += (lines.empty() ? "" : ";") + line_str(ln);
            csv.row({"m", "a", "b", "form", "classification", "lines"});
            csv.row({str(m), str(a), str(b), c.form, to_string(s.classification), lines});
        }
    } else if (cmd == "chi") {
        const std::int64_t m = index_of(c);
        const std::int64_t b = require(c.b, "b");
        if (b < 1) throw UsageError("--b must be positive");
        std::int64_t need = std::max(polar_order(m) + 1, chi_required_order(m, b));
        if (c.form == "slow") need = std::max(need, slow_requirement(m, 0, b));
        const JacobiForm phi = resolve_form(c.form, m, 0, b, choose_order(c, need), cache);
        csv.row({"n_b", "j", "q_exp", "coeffs"});
        for (std::int64_t nb = 0; nb < b; ++nb) {
            if (c.n_b && *c.n_b != nb) continue;
            const CycloSeries g = chi_generic(phi, b, nb);
            for (std::int64_t j = 0; j < b; ++j) {
                if (c.j && mod(*c.j, b) != j) continue;
                const CycloSeries s = g.specialize(j);
                for (const auto& [e, v] : s.coeffs) {
                    Rational q(e, s.q_den);
                    q.canonicalize();
                    std::string cs;
                    for (std::size_t i = 0; i < v.size(); ++i) cs += (i ? ";" : "") + v[i].get_str();
                    csv.row({str(nb), str(j), q.get_str(), cs});
                }
            }
        }
    } else if (cmd == "quotients") {
        const std::int64_t N = c.N_max.value_or(5);
        if (N < 1) throw UsageError("--N-max must be positive");
        if (c.m && c.b && !c.m_max) {
            csv.row({"m", "b", "quotient"});
            for (const ThetaQuotientSpec& q : enumerate_slow_quotients(*c.m, *c.b, N))
                csv.row({str(*c.m), str(*c.b), q.to_string()});
        } else {
            csv.row({"m", "b", "dim", "dim_theta"});
            for (std::int64_t m : index_range(c)) {
                const auto basis = polar_basis(m, c, cache);
                std::vector<std::int64_t> bs;
                if (c.b)
                    bs.push_back(*c.b);
                else
                    bs = reported_b_values(m, P_of_m(m, basis));
                for (std::int64_t b : bs)
                    csv.row({str(m), str(b), str(dim_slow_0b(basis, b)),
                             str(span_dimension(enumerate_slow_quotients(m, b, N)))});
            }
        }
    } else if (cmd == "figures") {
        const std::int64_t m_max = require(c.m_max, "m-max");
        if (m_max < 1) throw UsageError("--m-max must be positive");
        if (!c.output) throw UsageError("figures needs --output <directory>");
        const fs::path dir(*c.output);
        Csv p_csv, pp_csv, d_csv, j_csv;
        p_csv.row({"m", "P"});
        pp_csv.row({"m", "P_plus"});
        d_csv.row({"m", "b", "dim"});
        j_csv.row({"m", "j_minus"});
        ScatterSeries p_pts{"P(m)", "black", true, {}}, pp_pts{"P+(m)", "black", true, {}},
            j_pts{"j-(m)", "black", true, {}};
        const std::vector<std::string> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
        std::map<std::int64_t, ScatterSeries> by_b;
        ScatterSeries best{"max over b", "black", true, {}};
        for (std::int64_t m = 1; m <= m_max; ++m) {
            const auto basis = polar_basis(m, c, cache);
            const std::int64_t P = P_of_m(m, basis);
            p_csv.row({str(m), str(P)});
            p_pts.points.emplace_back(m, P);
            const std::int64_t pp = P_plus(m);
            pp_csv.row({str(m), str(pp)});
            pp_pts.points.emplace_back(m, pp);
            const std::int64_t jm = j_minus(m);
            j_csv.row({str(m), str(jm)});
            j_pts.points.emplace_back(m, jm);
            std::int64_t top = -1;
            for (std::int64_t b : reported_b_values(m, P)) {
                const std::int64_t d = dim_slow_0b(basis, b);
                d_csv.row({str(m), str(b), str(d)});
                auto it = by_b.find(b);
                if (it == by_b.end())
                    it = by_b.emplace(b, ScatterSeries{"b=" + str(b), colors[static_cast<std::size_t>(b - 1) % colors.size()],
                                                       false, {}})
                             .first;
                it->second.points.emplace_back(m, d);
                top = std::max(top, d);
            }
            if (top >= 0) best.points.emplace_back(m, top);
        }
        write_text(dir / "p_of_m.csv", p_csv.body.str());
        write_text(dir / "p_plus.csv", pp_csv.body.str());
        write_text(dir / "dims.csv", d_csv.body.str());
        write_text(dir / "j_minus.csv", j_csv.body.str());
        if (c.svg) {
            write_text(dir / "p_of_m.svg", scatter_svg("Smallest maximal polarity P(m)", "m", "P(m)", {p_pts}));
            write_text(dir / "p_plus.svg", scatter_svg("Upper bound P+(m)", "m", "P+(m)", {pp_pts}));
            std::vector<ScatterSeries> ds;
            for (auto& [b, s] : by_b) ds.push_back(s);
            ds.push_back(best);
            write_text(dir / "dims.svg", scatter_svg("Slow growing forms about y^b", "m", "dim", ds));
            write_text(dir / "j_minus.svg", scatter_svg("Lower bound j-(m)", "m", "j-(m)", {j_pts}));
        }
        return {};
    } else {
        throw UsageError("unknown command '" + cmd + "'");
    }
    return csv.body.str();
}

}  // namespace

JacobiForm resolve_form(const std::string& spec, std::int64_t m, std::int64_t a, std::int64_t b, std::int64_t order,
                        const std::optional<fs::path>& cache_dir) {
    if (spec == "phi01" || spec == "phi02" || spec == "phi03") return phi_generator(spec.back() - '0', order);
    if (spec.rfind("theta:", 0) == 0) return theta_quotient_form(ThetaQuotientSpec::parse(spec.substr(6)), order);
    if (spec.rfind("mono:", 0) == 0) {
        const auto e = parse_mono(spec.substr(5));
        if (!e) throw InvalidArgument("bad monomial " + spec);
        for (BasisElement& el : cached_basis(m, order, cache_dir))
            if (el.exps == *e) return el.form;
        throw InvalidArgument("monomial " + spec + " is not in the basis of index " + std::to_string(m));
    }
    if (spec != "slow") throw InvalidArgument("unknown form " + spec);
    const auto basis = cached_basis(m, order, cache_dir);
    std::vector<IntVector> space;
    if (a == 0) {
        space = slow_0b_kernel(basis, b);
    } else {
        space = estimate_slow_space(basis, PolarAnchor(a, b, m), 3, 2 * m).slow;
    }
    if (space.empty()) {
        std::ostringstream msg;
        msg << "no slow growing form of index " << m << " about q^" << a << " y^" << b;
        throw InvalidArgument(msg.str());
    }
    return normalized_sign(combine(basis, space.front()));
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto cache = resolve_cache_dir(config.cache_dir);
        const std::string csv = run(config, cache);
        if (config.command == "figures") return 0;
        if (config.output)
            write_text(fs::path(*config.output), csv);
        else
            out << csv;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const BeyondTruncation& e) {
        err << "error: " << e.what();
        if (e.required_order() >= 0) err << " (required order " << e.required_order() << ")";
        err << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wjf
