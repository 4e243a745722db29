#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wjf/forms.hpp"

namespace wjf {

/// On-disk basis expansions, one text file per (m, order):
///
///     WJF1 m=<m> order=<order>
///     <alpha> <beta> <gamma>
///     <n> <l> <coeff>
///     ...
///     <blank line>
///     <alpha> <beta> <gamma>
///     ...
///
/// Blocks follow basis_monomials(m) order.
inline constexpr const char* kCacheMagic = "WJF1";

std::filesystem::path cache_file(const std::filesystem::path& dir, std::int64_t m, std::int64_t order);

void write_basis_cache(const std::filesystem::path& file, std::int64_t m, std::int64_t order,
                       const std::vector<BasisElement>& basis);

/// Parses a cache file; InvariantViolation on a bad header or malformed body.
std::vector<BasisElement> read_basis_cache(const std::filesystem::path& file, std::int64_t m, std::int64_t order);

/// Flag value if present, else $WJF_CACHE_DIR if set and nonempty.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

/// Basis of J_{0,m} to the given order, read from (and written to) the cache
/// directory when one is given. A cached file of larger order is truncated.
std::vector<BasisElement> cached_basis(std::int64_t m, std::int64_t order,
                                       const std::optional<std::filesystem::path>& dir);

}  // namespace wjf
