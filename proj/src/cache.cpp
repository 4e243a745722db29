#include "wjf/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "wjf/error.hpp"

namespace fs = std::filesystem;

namespace wjf {

fs::path cache_file(const fs::path& dir, std::int64_t m, std::int64_t order) {
    return dir / ("basis_m" + std::to_string(m) + "_order" + std::to_string(order) + ".wjf");
}

void write_basis_cache(const fs::path& file, std::int64_t m, std::int64_t order,
                       const std::vector<BasisElement>& basis) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    // Write to a temporary name first so readers never see a partial file.
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InvalidArgument("cannot write cache file " + tmp.string());
        out << kCacheMagic << " m=" << m << " order=" << order << "\n";
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (k) out << "\n";
            const auto& e = basis[k].exps;
            out << e[0] << " " << e[1] << " " << e[2] << "\n";
            for (const BiSeries::Term& t : basis[k].form.series.terms())
                out << t.q_num << " " << t.y_num << " " << t.coeff.get_str() << "\n";
        }
        if (!out) throw InvalidArgument("failed writing cache file " + tmp.string());
    }
    fs::rename(tmp, file);
}

std::vector<BasisElement> read_basis_cache(const fs::path& file, std::int64_t m, std::int64_t order) {
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot read cache file " + file.string());
    std::string line;
    std::getline(in, line);
    std::ostringstream expect;
    expect << kCacheMagic << " m=" << m << " order=" << order;
    if (line != expect.str()) throw InvariantViolation("cache file " + file.string() + " has header '" + line + "'");

    const std::vector<MonomialExponents> monos = basis_monomials(static_cast<int>(m));
    std::vector<BasisElement> out;
    bool want_header = true;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            want_header = true;
            continue;
        }
        std::istringstream ls(line);
        auto bad = [&] {
            return InvariantViolation("cache file " + file.string() + ": malformed line " + std::to_string(lineno));
        };
        if (want_header) {
            MonomialExponents e{};
            if (!(ls >> e[0] >> e[1] >> e[2])) throw bad();
            if (out.size() >= monos.size() || monos[out.size()] != e) throw bad();
            JacobiForm f;
            f.weight = 0;
            f.index_m = static_cast<int>(m);
            f.series = BiSeries(1, 1, order);
            f.order = order;
            out.push_back({e, f});
            want_header = false;
            continue;
        }
        std::int64_t n = 0, l = 0;
        std::string c;
        if (!(ls >> n >> l >> c) || n >= order) throw bad();
        Integer v;
        if (v.set_str(c, 10) != 0) throw bad();
        out.back().form.series.add_term(n, l, v);
    }
    if (out.size() != monos.size())
        throw InvariantViolation("cache file " + file.string() + " has " + std::to_string(out.size()) + " blocks");
    return out;
}

std::optional<fs::path> resolve_cache_dir(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return fs::path(*flag);
    if (const char* env = std::getenv("WJF_CACHE_DIR"); env && *env) return fs::path(env);
    return std::nullopt;
}

std::vector<BasisElement> cached_basis(std::int64_t m, std::int64_t order, const std::optional<fs::path>& dir) {
    if (!dir) return basis_J0m(static_cast<int>(m), order);
    const fs::path exact = cache_file(*dir, m, order);
    if (fs::exists(exact)) return read_basis_cache(exact, m, order);

    // Any cached file of larger order serves after truncation.
    if (fs::is_directory(*dir)) {
        const std::regex pat("basis_m" + std::to_string(m) + "_order([0-9]+)\\.wjf");
        std::int64_t best = -1;
        for (const auto& entry : fs::directory_iterator(*dir)) {
            std::smatch match;
            const std::string name = entry.path().filename().string();
            if (!std::regex_match(name, match, pat)) continue;
            const std::int64_t o = std::stoll(match[1]);
            if (o > order && (best < 0 || o < best)) best = o;
        }
        if (best > 0) {
            std::vector<BasisElement> basis = read_basis_cache(cache_file(*dir, m, best), m, best);
            for (BasisElement& e : basis) {
                e.form.series = e.form.series.truncated_num(order);
                e.form.order = order;
            }
            return basis;
        }
    }
    std::vector<BasisElement> basis = basis_J0m(static_cast<int>(m), order);
    write_basis_cache(exact, m, order, basis);
    return basis;
}

}  // namespace wjf
