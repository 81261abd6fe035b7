#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace kloosterlab {

// In-place iterative radix-2 FFT over a power-of-two length.
class Pow2Fft {
 public:
  explicit Pow2Fft(std::size_t length);  // length must be a power of two

  std::size_t length() const { return length_; }

  void forward(std::span<std::complex<double>> data) const;  // kernel e(-2*pi*i*jk/M)
  void inverse(std::span<std::complex<double>> data) const;  // conjugate kernel, scaled by 1/M

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t length_;
  std::vector<std::complex<double>> twiddles_;  // e(-2*pi*i*j/M), j < M/2
  std::vector<std::uint32_t> bit_reverse_;
};

// Discrete Fourier transform of arbitrary (in particular prime) length n:
//
//   out[k] = sum_{j<n} in[j] * e(+2*pi*i*jk/n)
//
// realized by the Bluestein chirp-z reduction: with w[m] = e(pi*i*m^2/n),
// e(2*pi*i*jk/n) = w[j] w[k] conj(w[j-k]), so the transform is a linear
// convolution of in[j]*w[j] against conj(w), embedded in a power-of-two
// circular convolution of size M >= 2n-1.
//
// The plan precomputes the chirp and the spectrum of the chirp filter;
// transform() costs three power-of-two FFTs.
class PrimeDft {
 public:
  explicit PrimeDft(std::uint64_t n);

  std::uint64_t length() const { return n_; }

  void transform(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;

 private:
  std::uint64_t n_;
  Pow2Fft fft_;
  std::vector<std::complex<double>> chirp_;         // w[m], m < n
  std::vector<std::complex<double>> filter_spec_;   // FFT of wrapped conj(chirp)
};

}  // namespace kloosterlab
