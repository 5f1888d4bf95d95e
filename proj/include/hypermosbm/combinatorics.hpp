#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace hypermosbm {

using u128 = unsigned __int128;

/// Exact C(n, k), or nullopt if it does not fit in 128 bits.
std::optional<u128> binomial_exact(std::uint64_t n, std::uint64_t k);

/// C(n, k) as a 64-bit integer; throws std::overflow_error when it does not fit.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// log C(n, k). Exact (up to rounding of the final log) when C(n, k) fits in
/// 128 bits, lgamma-based otherwise.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// Poisson normalization of order s in an n-node hypergraph:
/// kappa_s = C(s, 2) * C(n - 2, s - 2).
/// Throws std::invalid_argument unless 2 <= s <= n, std::overflow_error if the
/// value exceeds 64 bits.
std::uint64_t kappa(std::uint64_t s, std::uint64_t n);

/// log kappa_s; usable for any 2 <= s <= n.
double log_kappa(std::uint64_t s, std::uint64_t n);

/// Per-subset constant of the closed-form non-edge term:
/// sum over s in orders of C(n-2, s-2) / kappa_s, which reduces to
/// sum over s of 1 / C(s, 2). Throws on an empty subset or s outside [2, n].
double subset_constant(std::span<const int> orders, std::uint64_t n);

/// Bell number B(n) (number of set partitions of an n-element set).
std::uint64_t bell_number(unsigned n);

}  // namespace hypermosbm
