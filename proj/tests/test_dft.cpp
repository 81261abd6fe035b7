#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <vector>

#include "kloosterlab/dft.hpp"
#include "kloosterlab/rng.hpp"
#include "oracles.hpp"

using namespace kloosterlab;

namespace {

std::vector<std::complex<double>> random_signal(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) {
    const double re = static_cast<double>(rng.next() >> 11) / 9007199254740992.0 - 0.5;
    const double im = static_cast<double>(rng.next() >> 11) / 9007199254740992.0 - 0.5;
    z = {re, im};
  }
  return v;
}

}  // namespace

TEST_CASE("pow2 fft: forward then inverse is the identity") {
  for (std::size_t n : {2u, 8u, 64u, 1024u}) {
    Pow2Fft fft(n);
    auto data = random_signal(n, 17 + n);
    const auto original = data;
    fft.forward(data);
    fft.inverse(data);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(data[i] - original[i]) < 1e-12);
  }
}

TEST_CASE("pow2 fft rejects non-powers of two") {
  CHECK_THROWS(Pow2Fft(0));
  CHECK_THROWS(Pow2Fft(12));
}

TEST_CASE("prime dft matches the naive quadratic transform") {
  for (std::uint64_t n : {2ull, 3ull, 5ull, 17ull, 101ull, 257ull}) {
    PrimeDft plan(n);
    auto in = random_signal(n, n);
    std::vector<std::complex<double>> out(n);
    plan.transform(in, out);
    const auto expected = oracles::dft_naive(in);
    for (std::uint64_t k = 0; k < n; ++k)
      CHECK(std::abs(out[k] - expected[k]) < 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("prime dft of a delta impulse is a pure character") {
  const std::uint64_t n = 31;
  PrimeDft plan(n);
  std::vector<std::complex<double>> in(n, {0.0, 0.0});
  const std::uint64_t j0 = 7;
  in[j0] = {1.0, 0.0};
  std::vector<std::complex<double>> out(n);
  plan.transform(in, out);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto expected = std::polar(1.0, step * static_cast<double>((j0 * k) % n));
    CHECK(std::abs(out[k] - expected) < 1e-12);
  }
}

TEST_CASE("prime dft is linear") {
  const std::uint64_t n = 53;
  PrimeDft plan(n);
  auto a = random_signal(n, 1);
  auto b = random_signal(n, 2);
  std::vector<std::complex<double>> sum(n);
  for (std::uint64_t i = 0; i < n; ++i) sum[i] = a[i] + 2.0 * b[i];
  std::vector<std::complex<double>> fa(n), fb(n), fsum(n);
  plan.transform(a, fa);
  plan.transform(b, fb);
  plan.transform(sum, fsum);
  for (std::uint64_t k = 0; k < n; ++k)
    CHECK(std::abs(fsum[k] - (fa[k] + 2.0 * fb[k])) < 1e-10);
}
