#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "kloosterlab/arith.hpp"

namespace kloosterlab {

enum class TableMethod : std::uint8_t { naive = 0, dft = 1 };

// |S| below zero_tolerance(p) is treated as "numerically zero": the defining
// sum never certifies a sign there, so sign statistics bucket these apart.
inline double zero_tolerance(std::uint64_t p) { return 1e-9 * std::sqrt(static_cast<double>(p)); }

// All values S(a, b; p) for a = 0..p-1 at a fixed twist b.
//
// Totality convention: index 0 is included (values[0] = -1, the full sum of
// nontrivial p-th roots of unity); statistics decide what to do with it.
struct KloostermanTable {
  PrimeModulus p;
  std::uint64_t b;       // twist, in [1, p)
  TableMethod method;
  std::vector<double> values;  // size p, values[a] = S(a, b; p)

  double weil_limit() const { return 2.0 * std::sqrt(static_cast<double>(p.value())); }

  // S(a,b;p) / (2 sqrt p), clamped to [-1, 1]: the cosine of the angle.
  double cos_ratio(std::uint64_t a) const {
    double r = values[a] / weil_limit();
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    return r;
  }
};

// theta[a] = angle of S(h*a, 1; p) in [0, pi], for every residue a.
struct AngleTable {
  PrimeModulus p;
  std::uint64_t h;
  std::vector<double> theta;  // size p
};

// Direct evaluation of the defining sum: sum over x = 1..p-1 of
// cos(2*pi*(a*x + b*inv(x))/p). The sum is real, so only cosines are summed.
double kloosterman_naive(std::int64_t a, std::int64_t b, PrimeModulus p);

// Builds the full table of S(a,b;p) for a = 0..p-1.
//   naive: O(p^2), refused for p > 1e5.
//   dft:   O(p log p); S(.,b;p) is the length-p DFT of x -> e(b*inv(x)/p).
// Throws std::domain_error when p | b, CostGuardError on the naive guard.
KloostermanTable build_table(std::int64_t b, PrimeModulus p, TableMethod method,
                             unsigned threads = 0);

// Angle table for twist h from a b=1 table, via S(a,h;p) = S(ah,1;p).
// Requires table.b == 1 and p not dividing h.
AngleTable build_angles(const KloostermanTable& table, std::int64_t h);

// ---- binary cache ----
// Layout: magic "KLTB", version u32, p u64, b u64, method u8, then p
// little-endian IEEE-754 doubles.
void save_table(const KloostermanTable& table, const std::filesystem::path& file);
KloostermanTable load_table(const std::filesystem::path& file);

std::filesystem::path table_cache_path(const std::filesystem::path& dir, std::uint64_t p,
                                       std::uint64_t b);

// nullopt on missing file or any header/content mismatch; callers rebuild.
std::optional<KloostermanTable> load_cached_table(const std::filesystem::path& dir,
                                                  std::uint64_t p, std::uint64_t b);

}  // namespace kloosterlab
