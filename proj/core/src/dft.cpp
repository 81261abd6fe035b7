#include "kloosterlab/dft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kloosterlab {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

Pow2Fft::Pow2Fft(std::size_t length) : length_(length) {
  if (!is_pow2(length)) throw std::invalid_argument("Pow2Fft: length must be a power of two");
  twiddles_.resize(length_ / 2);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(length_);
  for (std::size_t j = 0; j < twiddles_.size(); ++j)
    twiddles_[j] = std::polar(1.0, step * static_cast<double>(j));

  bit_reverse_.resize(length_);
  std::uint32_t bits = 0;
  while ((std::size_t{1} << bits) < length_) ++bits;
  for (std::size_t i = 0; i < length_; ++i) {
    std::uint32_t r = 0;
    for (std::uint32_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::uint32_t{1} << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void Pow2Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != length_) throw std::invalid_argument("Pow2Fft: size mismatch");
  auto* a = data.data();
  for (std::size_t i = 0; i < length_; ++i) {
    std::size_t r = bit_reverse_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  for (std::size_t len = 2; len <= length_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = length_ / len;
    for (std::size_t block = 0; block < length_; block += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddles_[j * stride];
        if (inverse) w = std::conj(w);
        std::complex<double>& lo = a[block + j];
        std::complex<double>& hi = a[block + j + half];
        const std::complex<double> t = w * hi;
        hi = lo - t;
        lo += t;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(length_);
    for (std::size_t i = 0; i < length_; ++i) a[i] *= scale;
  }
}

void Pow2Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }
void Pow2Fft::inverse(std::span<std::complex<double>> data) const { transform(data, true); }

PrimeDft::PrimeDft(std::uint64_t n) : n_(n), fft_(next_pow2(2 * n - 1)) {
  if (n == 0) throw std::invalid_argument("PrimeDft: zero length");

  // chirp_[m] = e(pi*i*m^2/n); reduce m^2 mod 2n first so the angle argument
  // stays O(1) and full double precision is kept for n up to ~1e9.
  chirp_.resize(n_);
  const double base = std::numbers::pi / static_cast<double>(n_);
  for (std::uint64_t m = 0; m < n_; ++m) {
    std::uint64_t sq = (m * m) % (2 * n_);
    chirp_[m] = std::polar(1.0, base * static_cast<double>(sq));
  }

  const std::size_t m_len = fft_.length();
  filter_spec_.assign(m_len, {0.0, 0.0});
  filter_spec_[0] = std::conj(chirp_[0]);
  for (std::uint64_t m = 1; m < n_; ++m) {
    filter_spec_[m] = std::conj(chirp_[m]);
    filter_spec_[m_len - m] = std::conj(chirp_[m]);
  }
  fft_.forward(filter_spec_);
}

void PrimeDft::transform(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("PrimeDft: size mismatch");

  std::vector<std::complex<double>> work(fft_.length(), {0.0, 0.0});
  for (std::uint64_t j = 0; j < n_; ++j) work[j] = in[j] * chirp_[j];
  fft_.forward(work);
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= filter_spec_[i];
  fft_.inverse(work);
  for (std::uint64_t k = 0; k < n_; ++k) out[k] = chirp_[k] * work[k];
}

}  // namespace kloosterlab
