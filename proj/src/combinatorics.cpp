#include "hypermosbm/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermosbm {

namespace {

constexpr u128 kU128Max = ~static_cast<u128>(0);

double to_double(u128 v) {
  return static_cast<double>(static_cast<long double>(v));
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::optional<u128> binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return u128{0};
  k = std::min(k, n - k);
  u128 result = 1;
  // result * (n - k + i) / i stays integral at every step; divide out the gcd
  // first so the intermediate product is as small as possible.
  for (std::uint64_t i = 1; i <= k; ++i) {
    u128 num = n - k + i;
    u128 den = i;
    u128 g = gcd128(result, den);
    result /= g;
    den /= g;
    num /= den;  // den now divides num
    if (num != 0 && result > kU128Max / num) return std::nullopt;
    result *= num;
  }
  return result;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  auto v = binomial_exact(n, k);
  if (!v || *v > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("binomial C(" + std::to_string(n) + ", " + std::to_string(k) +
                              ") exceeds 64 bits");
  return static_cast<std::uint64_t>(*v);
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (auto v = binomial_exact(n, k)) return std::log(to_double(*v));
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

static void check_order(std::uint64_t s, std::uint64_t n) {
  if (s < 2 || s > n)
    throw std::invalid_argument("order " + std::to_string(s) + " outside [2, " +
                                std::to_string(n) + "]");
}

std::uint64_t kappa(std::uint64_t s, std::uint64_t n) {
  check_order(s, n);
  const u128 pairs = s * (s - 1) / 2;
  auto rest = binomial_exact(n - 2, s - 2);
  if (!rest || *rest > std::numeric_limits<std::uint64_t>::max() / pairs)
    throw std::overflow_error("kappa(" + std::to_string(s) + ", " + std::to_string(n) +
                              ") exceeds 64 bits");
  return static_cast<std::uint64_t>(pairs * *rest);
}

double log_kappa(std::uint64_t s, std::uint64_t n) {
  check_order(s, n);
  const double pairs = static_cast<double>(s * (s - 1) / 2);
  if (auto rest = binomial_exact(n - 2, s - 2); rest && *rest <= kU128Max / (s * (s - 1) / 2))
    return std::log(to_double(*rest * (s * (s - 1) / 2)));
  return std::log(pairs) + log_binomial(n - 2, s - 2);
}

double subset_constant(std::span<const int> orders, std::uint64_t n) {
  if (orders.empty()) throw std::invalid_argument("subset_constant: empty order subset");
  double c = 0.0;
  for (int s : orders) {
    if (s < 0) throw std::invalid_argument("subset_constant: negative order");
    check_order(static_cast<std::uint64_t>(s), n);
    // C(n-2, s-2) / kappa_s = 1 / C(s, 2)
    c += 1.0 / (static_cast<double>(s) * (s - 1) / 2.0);
  }
  return c;
}

std::uint64_t bell_number(unsigned n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) {
      if (next.back() > std::numeric_limits<std::uint64_t>::max() - v)
        throw std::overflow_error("Bell number exceeds 64 bits");
      next.push_back(next.back() + v);
    }
    row = std::move(next);
  }
  return row.front();
}

}  // namespace hypermosbm
