#include "kloosterlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kloosterlab {

namespace {

// Largest modulus the fixed witness set certifies.
constexpr std::uint64_t kPrimalityLimit = 330000000000000ull;  // 3.3e14

constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t w : kWitnesses) {
    std::uint64_t x = pow_mod(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p) {
  if (p >= kPrimalityLimit)
    throw std::domain_error("PrimeModulus: " + std::to_string(p) +
                            " exceeds the deterministic primality certification limit");
  if (!is_prime(p)) throw std::domain_error("PrimeModulus: " + std::to_string(p) + " is not prime");
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t p) {
  std::int64_t m = static_cast<std::int64_t>(p);
  std::int64_t r = a % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t mod_inverse(std::uint64_t x, std::uint64_t p) {
  x %= p;
  if (x == 0) throw std::domain_error("mod_inverse: zero has no inverse");
  // Extended Euclid on (x, p); p prime so gcd is 1.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(x);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

Residue mod_inverse(Residue x) {
  return Residue{mod_inverse(x.value, x.modulus.value()), x.modulus};
}

std::vector<std::uint64_t> inverse_table(std::uint64_t p) {
  std::vector<std::uint64_t> inv(p, 0);
  if (p < 2) return inv;
  // prefix[x] = x! mod p; invert once; walk back to peel off factors.
  std::vector<std::uint64_t> prefix(p, 1);
  for (std::uint64_t x = 1; x < p; ++x) prefix[x] = mul_mod(prefix[x - 1], x, p);
  std::uint64_t acc = mod_inverse(prefix[p - 1], p);
  for (std::uint64_t x = p - 1; x >= 1; --x) {
    inv[x] = mul_mod(acc, prefix[x - 1], p);
    acc = mul_mod(acc, x, p);
  }
  return inv;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  constexpr std::uint64_t kSieveLimit = 1000000000ull;
  if (hi > kSieveLimit) throw std::domain_error("primes_in: upper bound exceeds 1e9");
  std::vector<std::uint64_t> result;
  if (hi < lo || hi < 2) return result;

  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 2;
  std::vector<bool> small_composite(root + 1, false);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (small_composite[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small_composite[j] = true;
  }

  std::uint64_t start = std::max<std::uint64_t>(lo + 1, 2);
  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<bool> seg;
  for (std::uint64_t seg_lo = start; seg_lo <= hi; seg_lo += kSegment) {
    std::uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    seg.assign(seg_hi - seg_lo + 1, true);
    for (std::uint64_t q : base) {
      if (q * q > seg_hi) break;
      std::uint64_t first = std::max(q * q, ((seg_lo + q - 1) / q) * q);
      for (std::uint64_t j = first; j <= seg_hi; j += q) seg[j - seg_lo] = false;
    }
    for (std::uint64_t n = seg_lo; n <= seg_hi; ++n) {
      if (n >= 2 && seg[n - seg_lo]) result.push_back(n);
    }
  }
  return result;
}

}  // namespace kloosterlab
