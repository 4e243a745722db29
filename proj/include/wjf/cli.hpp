#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wjf/error.hpp"
#include "wjf/forms.hpp"

namespace wjf {

/// Missing or inconsistent command-line arguments (exit status 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::optional<std::int64_t> m;
    std::optional<std::int64_t> m_max;
    std::optional<std::int64_t> a;
    std::optional<std::int64_t> b;
    std::optional<std::int64_t> order;
    std::optional<std::int64_t> n_max;
    std::optional<std::int64_t> l_max;
    std::optional<std::int64_t> N_max;
    std::optional<std::int64_t> n_b;
    std::optional<std::int64_t> j;
    std::string form = "slow";
    std::optional<std::string> output;  // file, or directory for `figures`
    std::optional<std::string> cache_dir;
    bool svg = false;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"basis", "polar", "pm",       "pminus",    "pplus",   "jminus",
                                                   "dims",  "f",     "classify", "chi",       "quotients", "figures"};
    return names;
}

/// Values of b reported for index m given P(m): P <= b^2 and b <= floor(sqrt m).
std::vector<std::int64_t> reported_b_values(std::int64_t m, std::int64_t P);

/// Resolves --form (phi01|phi02|phi03|mono:A,B,C|theta:nums/dens|slow) to a
/// form of index m at the given order. "slow" is the first slow vector about
/// q^a y^b, scaled so its first coefficient is positive.
JacobiForm resolve_form(const std::string& spec, std::int64_t m, std::int64_t a, std::int64_t b,
                        std::int64_t order, const std::optional<std::filesystem::path>& cache_dir);

/// Runs one command; CSV goes to the --output file or to `out`. Returns the
/// exit status: 0 ok, 1 domain error, 2 usage error (diagnostics on `err`).
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace wjf
