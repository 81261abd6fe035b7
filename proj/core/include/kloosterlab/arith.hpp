#pragma once

#include <cstdint>
#include <vector>

namespace kloosterlab {

// Deterministic Miller-Rabin with the first twelve prime witnesses,
// exact for n < 3.3e14 (Sorenson-Webster bound).
bool is_prime(std::uint64_t n);

// An integer modulus certified prime at construction time.
class PrimeModulus {
 public:
  explicit PrimeModulus(std::uint64_t p);

  std::uint64_t value() const { return p_; }

  friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

struct Residue {
  std::uint64_t value;  // in [0, p)
  PrimeModulus modulus;
};

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Representative of a in [0, p), correct for negative a.
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t p);

// Inverse of x mod p via extended Euclid. Throws std::domain_error for x = 0 mod p.
std::uint64_t mod_inverse(std::uint64_t x, std::uint64_t p);
Residue mod_inverse(Residue x);

// inv[x] = x^{-1} mod p for x = 1..p-1, inv[0] = 0.
// Linear-time prefix-product construction (one extended Euclid total).
std::vector<std::uint64_t> inverse_table(std::uint64_t p);

// Primes q with lo < q <= hi, ascending. Empty when hi < lo.
// Segmented sieve; hi is capped at 1e9.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

}  // namespace kloosterlab
